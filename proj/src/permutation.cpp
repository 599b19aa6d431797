#include "unshuffle/permutation.hpp"

#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace unshuffle {

Permutation::Permutation(std::vector<std::size_t> map) : map_(std::move(map)) {
  std::vector<bool> seen(map_.size(), false);
  for (std::size_t v : map_) {
    if (v >= map_.size() || seen[v]) {
      throw std::invalid_argument("Permutation: index map is not a bijection");
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> map(n);
  std::iota(map.begin(), map.end(), std::size_t{0});
  Permutation p;
  p.map_ = std::move(map);
  return p;
}

Permutation Permutation::inverse() const {
  Permutation inv;
  inv.map_.resize(map_.size());
  for (std::size_t i = 0; i < map_.size(); ++i) inv.map_[map_[i]] = i;
  return inv;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < map_.size(); ++i) {
    if (map_[i] != i) return false;
  }
  return true;
}

namespace {

void require_rows(const Permutation& perm, const DenseMatrix& mat) {
  if (perm.size() != mat.rows()) {
    throw std::invalid_argument(
        "apply_permutation: permutation length " + std::to_string(perm.size()) +
        " != matrix rows " + std::to_string(mat.rows()));
  }
}

}  // namespace

DenseMatrix apply_permutation(const Permutation& perm, const DenseMatrix& mat) {
  require_rows(perm, mat);
  const RowMajorMatrix& in = mat.values();
  RowMajorMatrix out(in.rows(), in.cols());
  for (Eigen::Index i = 0; i < in.rows(); ++i) {
    out.row(i) = in.row(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]));
  }
  return DenseMatrix(std::move(out));
}

DenseMatrix apply_transpose(const Permutation& perm, const DenseMatrix& mat) {
  require_rows(perm, mat);
  const RowMajorMatrix& in = mat.values();
  RowMajorMatrix out(in.rows(), in.cols());
  for (Eigen::Index i = 0; i < in.rows(); ++i) {
    out.row(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)])) = in.row(i);
  }
  return DenseMatrix(std::move(out));
}

}  // namespace unshuffle
