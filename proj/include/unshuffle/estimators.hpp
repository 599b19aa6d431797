#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "unshuffle/matrix.hpp"
#include "unshuffle/permutation.hpp"

namespace unshuffle {

// X is numerically rank deficient: sigma_min(X) < 1e-10 * sigma_max(X).
class RankDeficientError : public std::runtime_error {
 public:
  RankDeficientError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  // sigma_max / sigma_min, infinite when sigma_min == 0.
  double condition() const { return condition_; }

 private:
  double condition_;
};

inline constexpr double kRankTolerance = 1e-10;

struct EstimationResult {
  Permutation perm_hat;
  DenseMatrix b_hat;       // p x m
  double objective = 0.0;  // LAP objective of perm_hat
  std::size_t iterations = 1;
};

// Cost C = Y Y^T X X^T, so that <Pi, C> = sum_i C(i, pi(i)).
//
// The product is associated as whichever of (Y Y^T)(X X^T), (Y (Y^T X)) X^T
// or Y ((Y^T X) X^T) needs the fewest flops.
DenseMatrix build_onestep_cost(const DenseMatrix& x, const DenseMatrix& y);

// The same cost through one fixed association, exposed for cross-checks.
enum class CostAssociation { gram_product, via_xty_left, via_xty_right };
DenseMatrix build_onestep_cost(const DenseMatrix& x, const DenseMatrix& y,
                               CostAssociation association);

// One LAP solve on Y Y^T X X^T, then least squares for B under the recovered
// permutation. Needs neither sigma nor h.
EstimationResult one_step_estimate(const DenseMatrix& x, const DenseMatrix& y);

// argmax_Pi <Pi, Y B^T X^T> with the true signal supplied.
Permutation oracle_permutation_estimate(const DenseMatrix& x,
                                        const DenseMatrix& y,
                                        const DenseMatrix& b_true);

// argmin_B ||Pi^T Y - X B||_F through a Householder QR of X. Throws
// RankDeficientError when X fails the kRankTolerance check.
DenseMatrix least_squares_signal(const DenseMatrix& x, const DenseMatrix& y,
                                 const Permutation& perm);

// ||Y - Pi X B||_F.
double residual_norm(const DenseMatrix& x, const DenseMatrix& y,
                     const Permutation& perm, const DenseMatrix& b);

struct AltMinStep {
  std::size_t iteration = 0;
  // Hamming distance to the reference permutation, when one was given.
  std::optional<std::size_t> hamming;
  // Rows whose assignment changed relative to the previous iterate.
  std::size_t changed = 0;
  double residual = 0.0;  // ||Y - Pi X B||_F after the iteration
};

struct AltMinResult {
  EstimationResult estimate;
  std::vector<AltMinStep> trace;  // trace[0] is the starting point
  bool converged = false;         // stopped because the permutation repeated
};

// Alternates Pi <- argmax <Pi, Y B^T X^T> and B <- LS(X, Pi^T Y) from the
// starting pair (init_perm, init_b), for at most max_iters updates. Stops
// early when the permutation repeats. The residual never increases.
AltMinResult alternating_minimization(
    const DenseMatrix& x, const DenseMatrix& y, const Permutation& init_perm,
    const DenseMatrix& init_b, std::size_t max_iters,
    const std::optional<Permutation>& reference = std::nullopt);

// Same, starting from init_b with the identity as the initial permutation.
AltMinResult alternating_minimization(
    const DenseMatrix& x, const DenseMatrix& y, const DenseMatrix& init_b,
    std::size_t max_iters,
    const std::optional<Permutation>& reference = std::nullopt);

// Completes the unit vector e to an orthonormal basis Q (Gram-Schmidt against
// the canonical basis) with Q(:, 0) = e.
DenseMatrix complete_orthonormal_basis(const DenseMatrix& e);

// (X Q)(:, 0) for Q = complete_orthonormal_basis(e), as an n x 1 matrix.
// With a known direction e the p >= 2, m = 1 model reduces to
// y = ||beta|| Pi (XQ)(:, 0) + w. e is p x 1 with ||e||_2 = 1 (+-1e-10).
DenseMatrix reduce_known_direction(const DenseMatrix& x, const DenseMatrix& e);

}  // namespace unshuffle
