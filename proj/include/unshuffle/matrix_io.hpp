#pragma once

#include <filesystem>
#include <iosfwd>

#include "unshuffle/matrix.hpp"
#include "unshuffle/permutation.hpp"

namespace unshuffle {

// Matrix text format: a "rows cols" header line, then one line per row of
// whitespace-separated decimals. Values are written with 17 significant
// digits, which round-trips every double.
DenseMatrix read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const DenseMatrix& mat);

DenseMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path,
                       const DenseMatrix& mat);

// Permutation text format: one index per line, line i holding pi(i).
Permutation read_permutation(std::istream& in);
void write_permutation(std::ostream& out, const Permutation& perm);
void write_permutation_file(const std::filesystem::path& path,
                            const Permutation& perm);

}  // namespace unshuffle
