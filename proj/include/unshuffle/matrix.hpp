#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace unshuffle {

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Dense real matrix stored row-major. Every constructor rejects NaN/Inf, so a
// DenseMatrix in hand is always finite.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);  // zero-filled
  explicit DenseMatrix(RowMajorMatrix values);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static DenseMatrix from_rows(
      std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values_.cols()); }
  bool empty() const { return values_.size() == 0; }

  double operator()(std::size_t r, std::size_t c) const {
    return values_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

  const RowMajorMatrix& values() const { return values_; }
  std::span<const double> data() const {
    return {values_.data(), static_cast<std::size_t>(values_.size())};
  }

  double frobenius_norm() const { return values_.norm(); }
  double squared_frobenius_norm() const { return values_.squaredNorm(); }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.values_.rows() == b.values_.rows() &&
           a.values_.cols() == b.values_.cols() && a.values_ == b.values_;
  }

 private:
  RowMajorMatrix values_;
};

// Throws std::invalid_argument naming `what` when any entry is not finite.
void require_finite(const RowMajorMatrix& values, const char* what);

}  // namespace unshuffle
