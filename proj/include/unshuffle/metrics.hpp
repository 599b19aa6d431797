#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>

#include "unshuffle/matrix.hpp"
#include "unshuffle/permutation.hpp"

namespace unshuffle {

// Number of positions where a and b disagree.
std::size_t hamming_distance(const Permutation& a, const Permutation& b);

// Largest singular value. Full SVD when max(rows, cols) <= 2000, power
// iteration on B^T B (or B B^T) above that.
double operator_norm(const DenseMatrix& b);
double operator_norm_svd(const DenseMatrix& b);
double operator_norm_power(const DenseMatrix& b, double rel_tol = 1e-12,
                           std::size_t max_iters = 10000);

// ||B||_F^2 / ||B||_op^2.
double stable_rank(const DenseMatrix& b);

// Signal-to-noise ratio ||B||_F^2 / (m sigma^2), or the noiseless marker for
// sigma == 0. The marker compares greater than every finite value.
class Snr {
 public:
  static Snr finite(double value);
  static Snr noiseless() { return Snr(); }

  bool is_noiseless() const { return noiseless_; }
  // Throws std::logic_error for the noiseless marker.
  double value() const;
  // "inf" for the noiseless marker.
  std::string to_string() const;

  friend bool operator==(const Snr&, const Snr&) = default;
  friend std::partial_ordering operator<=>(const Snr& a, const Snr& b);

 private:
  Snr() = default;
  bool noiseless_ = true;
  double value_ = 0.0;
};

Snr snr(const DenseMatrix& b, std::size_t m, double sigma);

// logdet(I_m + B^T B / sigma^2), from the eigenvalues of B^T B.
double logdet_information(const DenseMatrix& b, double sigma);

// logdet(I_m + B^T B / sigma^2) / log n.
double logdet_ratio(const DenseMatrix& b, double sigma, std::size_t n);

// (log n! - 2) / n, computed with lgamma. Below this, per-coordinate, the
// log-det information is too small for any estimator to recover the
// permutation with error probability under 1/2.
double minimax_logdet_threshold(std::size_t n);

enum class Regime { unknown, hard, medium, easy };
std::string_view to_string(Regime regime);

struct RegimeThresholds {
  double c0 = 2.0;  // lower edge of the hard regime
};

// Easy: srank >= (log n)^4. Medium: log n <= srank < (log n)^4.
// Hard: c0 <= srank < log n. Unknown: srank < c0. Natural logarithm.
Regime classify_regime(double srank, std::size_t n,
                       RegimeThresholds thresholds = {});

// ||B_hat - B||_F / ||B||_F.
double relative_signal_error(const DenseMatrix& b_hat, const DenseMatrix& b_true);

}  // namespace unshuffle
