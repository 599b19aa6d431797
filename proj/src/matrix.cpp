#include "unshuffle/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace unshuffle {

void require_finite(const RowMajorMatrix& values, const char* what) {
  if (!values.allFinite()) {
    throw std::invalid_argument(std::string(what) +
                                ": matrix contains a non-finite entry");
  }
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : values_(RowMajorMatrix::Zero(static_cast<Eigen::Index>(rows),
                                   static_cast<Eigen::Index>(cols))) {}

DenseMatrix::DenseMatrix(RowMajorMatrix values) : values_(std::move(values)) {
  require_finite(values_, "DenseMatrix");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> data) {
  if (data.size() != rows * cols) {
    throw std::invalid_argument("DenseMatrix: data length " +
                                std::to_string(data.size()) + " != " +
                                std::to_string(rows) + "x" +
                                std::to_string(cols));
  }
  values_ = Eigen::Map<const RowMajorMatrix>(data.data(),
                                             static_cast<Eigen::Index>(rows),
                                             static_cast<Eigen::Index>(cols));
  require_finite(values_, "DenseMatrix");
}

DenseMatrix DenseMatrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) {
      throw std::invalid_argument("DenseMatrix::from_rows: ragged rows");
    }
    data.insert(data.end(), row.begin(), row.end());
  }
  return DenseMatrix(r, c, std::move(data));
}

}  // namespace unshuffle
