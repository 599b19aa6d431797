#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "unshuffle/matrix.hpp"

namespace unshuffle {

// A bijection on {0, ..., n-1} stored as an index map, map[i] = pi(i).
//
// Acting on a matrix, row i of (Pi M) is row pi(i) of M. Every module uses
// this convention, so <Pi, C> = sum_i C[i, pi(i)].
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> map);

  static Permutation identity(std::size_t n);

  std::size_t size() const { return map_.size(); }
  std::size_t operator[](std::size_t i) const { return map_[i]; }
  std::span<const std::size_t> map() const { return map_; }

  Permutation inverse() const;
  bool is_identity() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> map_;
};

// Row i of the result is row perm[i] of `mat`.
DenseMatrix apply_permutation(const Permutation& perm, const DenseMatrix& mat);

// Pi^T M, the undo of apply_permutation.
DenseMatrix apply_transpose(const Permutation& perm, const DenseMatrix& mat);

}  // namespace unshuffle
