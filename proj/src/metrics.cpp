#include "unshuffle/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <charconv>

namespace unshuffle {

std::size_t hamming_distance(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("hamming_distance: length mismatch");
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) count += a[i] != b[i];
  return count;
}

double operator_norm_svd(const DenseMatrix& b) {
  if (b.empty()) return 0.0;
  const Eigen::MatrixXd m = b.values();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

double operator_norm_power(const DenseMatrix& b, double rel_tol,
                           std::size_t max_iters) {
  if (b.empty()) return 0.0;
  const RowMajorMatrix& B = b.values();
  // Iterate on the smaller Gram matrix.
  const bool use_btb = B.cols() <= B.rows();
  const Eigen::MatrixXd gram = use_btb ? Eigen::MatrixXd(B.transpose() * B)
                                       : Eigen::MatrixXd(B * B.transpose());
  Eigen::VectorXd v = Eigen::VectorXd::Ones(gram.rows());
  v.normalize();
  double lambda = 0.0;
  for (std::size_t it = 0; it < max_iters; ++it) {
    Eigen::VectorXd w = gram * v;
    const double next = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) {
      // Started orthogonal to the range; restart along a fixed direction.
      v = Eigen::VectorXd::LinSpaced(gram.rows(), 1.0, 2.0).normalized();
      continue;
    }
    v = w / norm;
    if (it > 0 && std::abs(next - lambda) <= rel_tol * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

double operator_norm(const DenseMatrix& b) {
  return std::max(b.rows(), b.cols()) <= 2000 ? operator_norm_svd(b)
                                              : operator_norm_power(b);
}

double stable_rank(const DenseMatrix& b) {
  const double op = operator_norm(b);
  if (op == 0.0) throw std::invalid_argument("stable_rank: zero matrix");
  return b.squared_frobenius_norm() / (op * op);
}

Snr Snr::finite(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument("Snr: value must be finite and >= 0");
  }
  Snr s;
  s.noiseless_ = false;
  s.value_ = value;
  return s;
}

double Snr::value() const {
  if (noiseless_) throw std::logic_error("Snr: noiseless marker has no value");
  return value_;
}

std::string Snr::to_string() const {
  if (noiseless_) return "inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value_,
                                 std::chars_format::general, 12);
  (void)ec;
  return std::string(buf, ptr);
}

std::partial_ordering operator<=>(const Snr& a, const Snr& b) {
  if (a.noiseless_ || b.noiseless_) {
    return static_cast<int>(a.noiseless_) <=> static_cast<int>(b.noiseless_);
  }
  return a.value_ <=> b.value_;
}

Snr snr(const DenseMatrix& b, std::size_t m, double sigma) {
  if (m == 0) throw std::invalid_argument("snr: m must be positive");
  if (!(sigma >= 0.0)) throw std::invalid_argument("snr: sigma must be >= 0");
  if (sigma == 0.0) return Snr::noiseless();
  return Snr::finite(b.squared_frobenius_norm() /
                     (static_cast<double>(m) * sigma * sigma));
}

double logdet_information(const DenseMatrix& b, double sigma) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("logdet_information: sigma must be > 0");
  }
  const Eigen::MatrixXd gram = b.values().transpose() * b.values();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double s2 = sigma * sigma;
  double total = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    total += std::log1p(std::max(eig.eigenvalues()(i), 0.0) / s2);
  }
  return total;
}

double logdet_ratio(const DenseMatrix& b, double sigma, std::size_t n) {
  if (n < 2) throw std::invalid_argument("logdet_ratio: n must be >= 2");
  return logdet_information(b, sigma) / std::log(static_cast<double>(n));
}

double minimax_logdet_threshold(std::size_t n) {
  if (n == 0) throw std::invalid_argument("minimax_logdet_threshold: n == 0");
  const double dn = static_cast<double>(n);
  return (std::lgamma(dn + 1.0) - 2.0) / dn;
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::unknown:
      return "unknown";
    case Regime::hard:
      return "hard";
    case Regime::medium:
      return "medium";
    case Regime::easy:
      return "easy";
  }
  return "unknown";
}

Regime classify_regime(double srank, std::size_t n, RegimeThresholds thresholds) {
  const double log_n = std::log(static_cast<double>(n));
  if (srank >= std::pow(log_n, 4)) return Regime::easy;
  if (srank >= log_n) return Regime::medium;
  if (srank >= thresholds.c0) return Regime::hard;
  return Regime::unknown;
}

double relative_signal_error(const DenseMatrix& b_hat, const DenseMatrix& b_true) {
  if (b_hat.rows() != b_true.rows() || b_hat.cols() != b_true.cols()) {
    throw std::invalid_argument("relative_signal_error: shape mismatch");
  }
  const double denom = b_true.frobenius_norm();
  if (denom == 0.0) {
    throw std::invalid_argument("relative_signal_error: b_true is zero");
  }
  return (b_hat.values() - b_true.values()).norm() / denom;
}

}  // namespace unshuffle
