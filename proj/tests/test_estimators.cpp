#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "unshuffle/estimators.hpp"
#include "unshuffle/instrumentation.hpp"
#include "unshuffle/lap.hpp"
#include "unshuffle/metrics.hpp"
#include "unshuffle/model.hpp"

using namespace unshuffle;
using namespace unshuffle::testing;

namespace {

double relative_diff(const DenseMatrix& a, const DenseMatrix& b) {
  return max_abs_diff(a, b) / std::max(max_abs(b), 1e-300);
}

}  // namespace

TEST_CASE("build_onestep_cost small cases") {
  const DenseMatrix ones = DenseMatrix::from_rows({{1}, {1}});
  CHECK(build_onestep_cost(ones, ones) == DenseMatrix::from_rows({{2, 2}, {2, 2}}));
  const DenseMatrix x = DenseMatrix::from_rows({{3.0}});
  const DenseMatrix y = DenseMatrix::from_rows({{-2.0}});
  CHECK(build_onestep_cost(x, y)(0, 0) == 36.0);
  CHECK_THROWS_AS(build_onestep_cost(DenseMatrix(3, 2), DenseMatrix(4, 2)),
                  std::invalid_argument);
}

TEST_CASE("build_onestep_cost agrees with the literal (YY^T)(XX^T)") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const DenseMatrix x = random_gaussian(5, 2, 100 + s);
    const DenseMatrix y = random_gaussian(5, 3, 200 + s);
    const DenseMatrix oracle = naive_onestep_cost(x, y);
    CHECK(relative_diff(build_onestep_cost(x, y), oracle) <= 1e-12);
    for (auto assoc : {CostAssociation::gram_product, CostAssociation::via_xty_left,
                       CostAssociation::via_xty_right}) {
      CHECK(relative_diff(build_onestep_cost(x, y, assoc), oracle) <= 1e-12);
    }
  }
  // Shapes that select each association.
  for (auto [n, p, m] : {std::tuple{40, 3, 30}, std::tuple{40, 30, 3}, std::tuple{6, 20, 20}}) {
    const DenseMatrix x = random_gaussian(n, p, 7);
    const DenseMatrix y = random_gaussian(n, m, 8);
    CHECK(relative_diff(build_onestep_cost(x, y), naive_onestep_cost(x, y)) <= 1e-12);
  }
}

TEST_CASE("one_step_estimate recovers the noiseless warm-up case") {
  const DenseMatrix beta = DenseMatrix::from_rows({{1.0}});
  std::size_t exact = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const ProblemInstance inst =
        synthesize_instance(200, 1, 1, 50, Distribution::gaussian, beta, 0.0, s);
    exact += one_step_estimate(inst.x, inst.y).perm_hat == inst.perm_true;
  }
  CHECK(exact >= 99);
}

TEST_CASE("one_step_estimate fails for p = 2, m = 1 even without noise") {
  const DenseMatrix beta = DenseMatrix::from_rows({{1000.0}, {1000.0}});
  const ProblemInstance inst =
      synthesize_instance(1000, 2, 1, 1000, Distribution::gaussian, beta, 0.0, 1);
  const EstimationResult est = one_step_estimate(inst.x, inst.y);
  CHECK(hamming_distance(est.perm_hat, inst.perm_true) >= 700);
}

TEST_CASE("one_step_estimate is exact on consistent unshuffled data") {
  const std::size_t p = 30, m = 30;
  const DenseMatrix b = build_canonical_signal(p, m);
  const ProblemInstance inst = synthesize_instance(60, p, m, 0, Distribution::gaussian, b, 0.0, 4);
  const EstimationResult est = one_step_estimate(inst.x, inst.y);
  CHECK(est.perm_hat.is_identity());
  CHECK(relative_signal_error(est.b_hat, b) <= 1e-8);
  CHECK(est.iterations == 1);

  // At n <= 7 the identity is the unique maximizer, confirmed exhaustively.
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ProblemInstance small =
        synthesize_instance(7, 3, 3, 0, Distribution::gaussian, build_canonical_signal(3, 3), 0.0, s);
    const DenseMatrix cost = build_onestep_cost(small.x, small.y);
    CHECK(lap_brute_force(cost).perm.is_identity());
    CHECK(one_step_estimate(small.x, small.y).perm_hat.is_identity());
  }
}

TEST_CASE("one_step_estimate errors") {
  CHECK_THROWS_AS(one_step_estimate(random_gaussian(3, 4, 1), random_gaussian(3, 2, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(one_step_estimate(random_gaussian(5, 2, 1), random_gaussian(4, 2, 2)),
                  std::invalid_argument);
  // Duplicate column: exactly rank deficient.
  const DenseMatrix col = random_gaussian(10, 1, 3);
  std::vector<double> dup;
  for (std::size_t i = 0; i < 10; ++i) {
    dup.push_back(col(i, 0));
    dup.push_back(col(i, 0));
  }
  const DenseMatrix x(10, 2, dup);
  try {
    one_step_estimate(x, random_gaussian(10, 2, 4));
    FAIL("expected RankDeficientError");
  } catch (const RankDeficientError& e) {
    CHECK(e.condition() > 1e10);
  }
}

TEST_CASE("scaling X and Y leaves the permutation unchanged") {
  const DenseMatrix b = build_canonical_signal(10, 10);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ProblemInstance inst =
        synthesize_instance(60, 10, 10, 20, Distribution::gaussian, b, 0.5, 50 + s);
    const Permutation base = one_step_estimate(inst.x, inst.y).perm_hat;
    for (double alpha : {0.5, 3.0, 100.0}) {
      for (double gamma : {0.5, 3.0, 100.0}) {
        CHECK(one_step_estimate(scaled(inst.x, alpha), scaled(inst.y, gamma)).perm_hat == base);
      }
    }
  }
}

TEST_CASE("one_step_estimate does one LAP solve and one least-squares solve") {
  const DenseMatrix b = build_canonical_signal(5, 5);
  const ProblemInstance inst = synthesize_instance(40, 5, 5, 10, Distribution::gaussian, b, 0.1, 2);
  thread_solve_counters().reset();
  one_step_estimate(inst.x, inst.y);
  CHECK(thread_solve_counters().lap_solves == 1);
  CHECK(thread_solve_counters().least_squares_solves == 1);
}

TEST_CASE("objective equivalence: max <Pi, YY^T XX^T> = min ||Y - Pi X X^T Y||") {
  Rng rng(71);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.below(6);
    const std::size_t p = 1 + rng.below(3), m = 1 + rng.below(3);
    const DenseMatrix x = random_gaussian(n, p, rng.next());
    const DenseMatrix y = random_gaussian(n, m, rng.next());
    const Permutation by_cost = lap_brute_force(naive_onestep_cost(x, y)).perm;
    const DenseMatrix fitted = naive_product(x, naive_product(naive_transpose(x), y));
    CHECK(brute_force_min_residual(y, fitted) == by_cost);
  }
}

TEST_CASE("oracle_permutation_estimate") {
  const DenseMatrix b = build_canonical_signal(5, 5);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ProblemInstance inst = synthesize_instance(50, 5, 5, 20, Distribution::gaussian, b, 0.0, s);
    const Permutation perm = oracle_permutation_estimate(inst.x, inst.y, b);
    const DenseMatrix cost(RowMajorMatrix(inst.y.values() * (inst.x.values() * b.values()).transpose()));
    CHECK(assignment_objective(cost, perm) >= assignment_objective(cost, inst.perm_true));
    CHECK(oracle_permutation_estimate(inst.x, inst.y, scaled(b, 7.5)) == perm);
    CHECK(oracle_permutation_estimate(inst.x, inst.y, scaled(b, 0.01)) == perm);
  }
  CHECK_THROWS_AS(oracle_permutation_estimate(random_gaussian(5, 2, 1), random_gaussian(5, 2, 2),
                                              random_gaussian(3, 2, 3)),
                  std::invalid_argument);
}

TEST_CASE("least_squares_signal") {
  const DenseMatrix y = random_gaussian(4, 3, 1);
  const DenseMatrix eye = build_canonical_signal(4, 4);
  CHECK(relative_diff(least_squares_signal(eye, y, Permutation::identity(4)), y) <= 1e-15);

  const DenseMatrix b = random_gaussian(6, 4, 2);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ProblemInstance inst = synthesize_instance(80, 6, 4, 30, Distribution::uniform, b, 0.0, s);
    CHECK(relative_signal_error(least_squares_signal(inst.x, inst.y, inst.perm_true), b) <= 1e-10);
  }

  // Linearity: Y + X C shifts the estimate by C.
  const DenseMatrix x = random_gaussian(30, 4, 5);
  const DenseMatrix yy = random_gaussian(30, 2, 6);
  const DenseMatrix shift = random_gaussian(4, 2, 7);
  const DenseMatrix moved(RowMajorMatrix(yy.values() + x.values() * shift.values()));
  const DenseMatrix base = least_squares_signal(x, yy, Permutation::identity(30));
  const DenseMatrix after = least_squares_signal(x, moved, Permutation::identity(30));
  CHECK(max_abs_diff(DenseMatrix(RowMajorMatrix(after.values() - base.values())), shift) <= 1e-12);

  CHECK_THROWS_AS(least_squares_signal(x, yy, Permutation::identity(29)), std::invalid_argument);
  CHECK_THROWS_AS(least_squares_signal(random_gaussian(3, 4, 1), random_gaussian(3, 1, 1),
                                       Permutation::identity(3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(least_squares_signal(DenseMatrix(5, 2), random_gaussian(5, 1, 1),
                                       Permutation::identity(5)),
                  RankDeficientError);
}

TEST_CASE("alternating minimization: residual never increases") {
  const DenseMatrix beta = DenseMatrix::from_rows({{3.0}, {-1.0}, {2.0}});
  for (std::uint64_t s = 0; s < 5; ++s) {
    const ProblemInstance inst =
        synthesize_instance(120, 3, 1, 60, Distribution::gaussian, beta, 0.2, s);
    const EstimationResult init = one_step_estimate(inst.x, inst.y);
    const AltMinResult run = alternating_minimization(inst.x, inst.y, init.perm_hat, init.b_hat,
                                                      30, inst.perm_true);
    REQUIRE(run.trace.size() >= 2);
    CHECK(run.trace[0].hamming == hamming_distance(init.perm_hat, inst.perm_true));
    for (std::size_t t = 1; t < run.trace.size(); ++t) {
      CHECK(run.trace[t].iteration == t);
      CHECK(run.trace[t].residual <= run.trace[t - 1].residual);
    }
    if (run.converged) CHECK(run.trace.back().changed == 0);
  }
}

TEST_CASE("alternating minimization started at the true signal recovers Pi at once") {
  const std::size_t p = 40, m = 40;
  const DenseMatrix b = build_canonical_signal(p, m);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const ProblemInstance inst = synthesize_instance(100, p, m, 40, Distribution::gaussian, b, 0.0, s);
    const AltMinResult run = alternating_minimization(inst.x, inst.y, b, 5, inst.perm_true);
    REQUIRE(run.trace.size() >= 2);
    CHECK(run.trace[1].hamming == 0);
    CHECK(run.estimate.perm_hat == inst.perm_true);
    CHECK(relative_signal_error(run.estimate.b_hat, b) <= 1e-8);
  }
}

TEST_CASE("alternating minimization stalls on the fully shuffled p = 2 case") {
  const DenseMatrix beta = DenseMatrix::from_rows({{1000.0}, {1000.0}});
  const ProblemInstance inst =
      synthesize_instance(1000, 2, 1, 1000, Distribution::gaussian, beta, 0.0, 1);
  const EstimationResult init = one_step_estimate(inst.x, inst.y);
  const AltMinResult run =
      alternating_minimization(inst.x, inst.y, init.perm_hat, init.b_hat, 20, inst.perm_true);
  CHECK(*run.trace.front().hamming >= 700);
  CHECK(*run.trace.back().hamming >= 500);
}

TEST_CASE("alternating minimization input checks") {
  const DenseMatrix x = random_gaussian(10, 2, 1), y = random_gaussian(10, 1, 2);
  CHECK_THROWS_AS(alternating_minimization(x, y, random_gaussian(3, 1, 3), 5), std::invalid_argument);
  CHECK_THROWS_AS(alternating_minimization(x, y, Permutation::identity(9), random_gaussian(2, 1, 3), 5),
                  std::invalid_argument);
  const AltMinResult zero = alternating_minimization(x, y, random_gaussian(2, 1, 3), 0);
  CHECK(zero.trace.size() == 1);
  CHECK_FALSE(zero.trace[0].hamming.has_value());
}

TEST_CASE("known-direction reduction") {
  const DenseMatrix x = random_gaussian(20, 4, 9);
  const DenseMatrix e1 = DenseMatrix::from_rows({{1}, {0}, {0}, {0}});
  const DenseMatrix col = reduce_known_direction(x, e1);
  REQUIRE(col.cols() == 1);
  for (std::size_t i = 0; i < 20; ++i) CHECK(col(i, 0) == x(i, 0));
  CHECK(complete_orthonormal_basis(e1) == build_canonical_signal(4, 4));

  Rng rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t p = 1 + rng.below(10);
    DenseMatrix raw = random_gaussian(p, 1, rng.next());
    const DenseMatrix e = scaled(raw, 1.0 / raw.frobenius_norm());
    const DenseMatrix q = complete_orthonormal_basis(e);
    const RowMajorMatrix gram = q.values().transpose() * q.values();
    CHECK((gram - RowMajorMatrix::Identity(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p)))
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
    for (std::size_t i = 0; i < p; ++i) CHECK(q(i, 0) == e(i, 0));
  }

  CHECK_THROWS_AS(reduce_known_direction(x, DenseMatrix::from_rows({{1}, {1}, {0}, {0}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(reduce_known_direction(x, DenseMatrix::from_rows({{1}, {0}})),
                  std::invalid_argument);
}

TEST_CASE("known-direction column is distributed like a design column") {
  // E ||X e||^2 = n for Gaussian X and unit e; 500 seeds, 5 standard errors.
  const std::size_t n = 50, p = 6;
  const DenseMatrix raw = DenseMatrix::from_rows({{1}, {2}, {-1}, {0.5}, {3}, {-2}});
  const DenseMatrix e = scaled(raw, 1.0 / raw.frobenius_norm());
  std::vector<double> norms;
  for (std::uint64_t s = 0; s < 500; ++s) {
    norms.push_back(reduce_known_direction(random_gaussian(n, p, 9000 + s), e).squared_frobenius_norm());
  }
  const Moments mo = moments(norms);
  CHECK(std::abs(mo.mean - static_cast<double>(n)) <= 5.0 * std::sqrt(mo.variance / 500.0));
}

TEST_CASE("known-direction reduction turns p = 2 into the solvable warm-up") {
  const DenseMatrix beta = DenseMatrix::from_rows({{1000.0}, {1000.0}});
  const DenseMatrix e = scaled(beta, 1.0 / beta.frobenius_norm());
  const ProblemInstance inst = synthesize_instance(300, 2, 1, 300, Distribution::gaussian, beta, 0.0, 3);
  const DenseMatrix reduced = reduce_known_direction(inst.x, e);
  CHECK(one_step_estimate(reduced, inst.y).perm_hat == inst.perm_true);
}
