#include "unshuffle/estimators.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "unshuffle/instrumentation.hpp"
#include "unshuffle/lap.hpp"
#include "unshuffle/metrics.hpp"

namespace unshuffle {

namespace {

void require_same_rows(const DenseMatrix& x, const DenseMatrix& y,
                       const char* who) {
  if (x.rows() != y.rows()) {
    throw std::invalid_argument(std::string(who) + ": x has " +
                                std::to_string(x.rows()) + " rows but y has " +
                                std::to_string(y.rows()));
  }
}

double flops(CostAssociation association, double n, double m, double p) {
  switch (association) {
    case CostAssociation::gram_product:
      return n * n * (m + p) + n * n * n;
    case CostAssociation::via_xty_left:
      return 2.0 * n * m * p + n * n * p;
    case CostAssociation::via_xty_right:
      return 2.0 * n * m * p + n * n * m;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace

DenseMatrix build_onestep_cost(const DenseMatrix& x, const DenseMatrix& y,
                               CostAssociation association) {
  require_same_rows(x, y, "build_onestep_cost");
  const RowMajorMatrix& X = x.values();
  const RowMajorMatrix& Y = y.values();
  switch (association) {
    case CostAssociation::gram_product: {
      RowMajorMatrix yyt = Y * Y.transpose();
      RowMajorMatrix xxt = X * X.transpose();
      return DenseMatrix(RowMajorMatrix(yyt * xxt));
    }
    case CostAssociation::via_xty_left: {
      RowMajorMatrix ytx = Y.transpose() * X;  // m x p
      RowMajorMatrix left = Y * ytx;           // n x p
      return DenseMatrix(RowMajorMatrix(left * X.transpose()));
    }
    case CostAssociation::via_xty_right: {
      RowMajorMatrix ytx = Y.transpose() * X;            // m x p
      RowMajorMatrix right = ytx * X.transpose();        // m x n
      return DenseMatrix(RowMajorMatrix(Y * right));
    }
  }
  throw std::invalid_argument("build_onestep_cost: unknown association");
}

DenseMatrix build_onestep_cost(const DenseMatrix& x, const DenseMatrix& y) {
  require_same_rows(x, y, "build_onestep_cost");
  const double n = static_cast<double>(x.rows());
  const double p = static_cast<double>(x.cols());
  const double m = static_cast<double>(y.cols());
  CostAssociation best = CostAssociation::via_xty_left;
  for (CostAssociation candidate :
       {CostAssociation::via_xty_right, CostAssociation::gram_product}) {
    if (flops(candidate, n, m, p) < flops(best, n, m, p)) best = candidate;
  }
  return build_onestep_cost(x, y, best);
}

DenseMatrix least_squares_signal(const DenseMatrix& x, const DenseMatrix& y,
                                 const Permutation& perm) {
  require_same_rows(x, y, "least_squares_signal");
  if (perm.size() != x.rows()) {
    throw std::invalid_argument("least_squares_signal: permutation length " +
                                std::to_string(perm.size()) + " != n " +
                                std::to_string(x.rows()));
  }
  if (x.rows() < x.cols()) {
    throw std::invalid_argument("least_squares_signal: n < p");
  }
  ++thread_solve_counters().least_squares_solves;

  const Eigen::MatrixXd X = x.values();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
  const Eigen::Index p = X.cols();
  const Eigen::MatrixXd r =
      qr.matrixQR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::VectorXd singular = Eigen::JacobiSVD<Eigen::MatrixXd>(r).singularValues();
  const double largest = singular.size() ? singular(0) : 0.0;
  const double smallest = singular.size() ? singular(singular.size() - 1) : 0.0;
  if (!(smallest >= kRankTolerance * largest) || largest == 0.0) {
    const double condition = smallest > 0.0
                                 ? largest / smallest
                                 : std::numeric_limits<double>::infinity();
    throw RankDeficientError(
        "least_squares_signal: X is numerically rank deficient (condition "
        "estimate " + std::to_string(condition) + ")",
        condition);
  }

  const Eigen::MatrixXd rhs = apply_transpose(perm, y).values();
  return DenseMatrix(RowMajorMatrix(qr.solve(rhs)));
}

double residual_norm(const DenseMatrix& x, const DenseMatrix& y,
                     const Permutation& perm, const DenseMatrix& b) {
  const DenseMatrix fitted(RowMajorMatrix(x.values() * b.values()));
  return (y.values() - apply_permutation(perm, fitted).values()).norm();
}

EstimationResult one_step_estimate(const DenseMatrix& x, const DenseMatrix& y) {
  require_same_rows(x, y, "one_step_estimate");
  if (x.rows() < x.cols()) {
    throw std::invalid_argument("one_step_estimate: n < p");
  }
  Assignment assignment = lap_maximize(build_onestep_cost(x, y));
  EstimationResult result;
  result.b_hat = least_squares_signal(x, y, assignment.perm);
  result.perm_hat = std::move(assignment.perm);
  result.objective = assignment.objective;
  result.iterations = 1;
  return result;
}

namespace {

Assignment oracle_assignment(const DenseMatrix& x, const DenseMatrix& y,
                             const DenseMatrix& b) {
  const RowMajorMatrix fitted = x.values() * b.values();  // n x m
  return lap_maximize(
      DenseMatrix(RowMajorMatrix(y.values() * fitted.transpose())));
}

}  // namespace

Permutation oracle_permutation_estimate(const DenseMatrix& x,
                                        const DenseMatrix& y,
                                        const DenseMatrix& b_true) {
  require_same_rows(x, y, "oracle_permutation_estimate");
  if (b_true.rows() != x.cols() || b_true.cols() != y.cols()) {
    throw std::invalid_argument(
        "oracle_permutation_estimate: b_true must be p x m");
  }
  return oracle_assignment(x, y, b_true).perm;
}

AltMinResult alternating_minimization(
    const DenseMatrix& x, const DenseMatrix& y, const Permutation& init_perm,
    const DenseMatrix& init_b, std::size_t max_iters,
    const std::optional<Permutation>& reference) {
  require_same_rows(x, y, "alternating_minimization");
  if (x.rows() < x.cols()) {
    throw std::invalid_argument("alternating_minimization: n < p");
  }
  if (init_b.rows() != x.cols() || init_b.cols() != y.cols()) {
    throw std::invalid_argument("alternating_minimization: init_b must be p x m");
  }
  if (init_perm.size() != x.rows()) {
    throw std::invalid_argument(
        "alternating_minimization: init_perm length != n");
  }
  if (reference && reference->size() != x.rows()) {
    throw std::invalid_argument(
        "alternating_minimization: reference length != n");
  }

  auto distance_to_reference = [&](const Permutation& perm) {
    return reference ? std::optional<std::size_t>(hamming_distance(perm, *reference))
                     : std::nullopt;
  };

  AltMinResult result;
  result.estimate.perm_hat = init_perm;
  result.estimate.b_hat = init_b;
  result.estimate.iterations = 0;
  result.trace.push_back({0, distance_to_reference(init_perm), 0,
                          residual_norm(x, y, init_perm, init_b)});

  for (std::size_t t = 1; t <= max_iters; ++t) {
    Assignment step = oracle_assignment(x, y, result.estimate.b_hat);
    const std::size_t changed = hamming_distance(step.perm, result.estimate.perm_hat);
    result.estimate.b_hat = least_squares_signal(x, y, step.perm);
    result.estimate.perm_hat = std::move(step.perm);
    result.estimate.objective = step.objective;
    result.estimate.iterations = t;
    result.trace.push_back(
        {t, distance_to_reference(result.estimate.perm_hat), changed,
         residual_norm(x, y, result.estimate.perm_hat, result.estimate.b_hat)});
    if (changed == 0) {
      result.converged = true;
      break;
    }
  }
  return result;
}

AltMinResult alternating_minimization(
    const DenseMatrix& x, const DenseMatrix& y, const DenseMatrix& init_b,
    std::size_t max_iters, const std::optional<Permutation>& reference) {
  return alternating_minimization(x, y, Permutation::identity(x.rows()), init_b,
                                  max_iters, reference);
}

DenseMatrix complete_orthonormal_basis(const DenseMatrix& e) {
  if (e.cols() != 1 || e.rows() == 0) {
    throw std::invalid_argument("complete_orthonormal_basis: e must be p x 1");
  }
  const Eigen::VectorXd dir = e.values().col(0);
  if (std::abs(dir.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument(
        "complete_orthonormal_basis: e must have unit norm (got " +
        std::to_string(dir.norm()) + ")");
  }
  const Eigen::Index p = dir.size();
  RowMajorMatrix q = RowMajorMatrix::Zero(p, p);
  q.col(0) = dir;
  std::vector<char> taken(static_cast<std::size_t>(p), 0);

  // Modified Gram-Schmidt with one re-orthogonalisation pass. At each step
  // the canonical vector with the largest orthogonal remainder is taken.
  for (Eigen::Index k = 1; k < p; ++k) {
    Eigen::VectorXd best;
    double best_norm = -1.0;
    Eigen::Index best_index = -1;
    for (Eigen::Index c = 0; c < p; ++c) {
      if (taken[static_cast<std::size_t>(c)]) continue;
      Eigen::VectorXd v = Eigen::VectorXd::Unit(p, c);
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index j = 0; j < k; ++j) {
          v -= q.col(j).dot(v) * q.col(j);
        }
      }
      const double norm = v.norm();
      if (norm > best_norm) {
        best_norm = norm;
        best = std::move(v);
        best_index = c;
      }
    }
    taken[static_cast<std::size_t>(best_index)] = 1;
    q.col(k) = best / best_norm;
  }
  return DenseMatrix(std::move(q));
}

DenseMatrix reduce_known_direction(const DenseMatrix& x, const DenseMatrix& e) {
  if (e.rows() != x.cols()) {
    throw std::invalid_argument("reduce_known_direction: e must be p x 1");
  }
  const DenseMatrix q = complete_orthonormal_basis(e);
  RowMajorMatrix column = x.values() * q.values().col(0);
  return DenseMatrix(std::move(column));
}

}  // namespace unshuffle
