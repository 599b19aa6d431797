#include "unshuffle/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace unshuffle {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf, ptr);
}

}  // namespace

DenseMatrix read_matrix(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) {
    throw std::runtime_error("matrix: missing 'rows cols' header");
  }
  std::istringstream hs(header);
  long long rows = -1;
  long long cols = -1;
  std::string extra;
  if (!(hs >> rows >> cols) || (hs >> extra) || rows < 0 || cols < 0) {
    throw std::runtime_error("matrix: malformed header '" + header + "'");
  }
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(rows * cols));
  std::string line;
  for (long long r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) {
      throw std::runtime_error("matrix: expected " + std::to_string(rows) +
                               " rows, found " + std::to_string(r));
    }
    std::istringstream ls(line);
    std::string token;
    long long c = 0;
    while (ls >> token) {
      double v = 0.0;
      const char* first = token.data();
      const char* last = token.data() + token.size();
      if (*first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc{} || ptr != last) {
        throw std::runtime_error("matrix: row " + std::to_string(r) +
                                 ": cannot parse '" + token + "'");
      }
      data.push_back(v);
      ++c;
    }
    if (c != cols) {
      throw std::runtime_error("matrix: row " + std::to_string(r) + " has " +
                               std::to_string(c) + " values, expected " +
                               std::to_string(cols));
    }
  }
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      throw std::runtime_error("matrix: trailing data after last row");
    }
  }
  try {
    return DenseMatrix(static_cast<std::size_t>(rows),
                       static_cast<std::size_t>(cols), std::move(data));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("matrix: ") + e.what());
  }
}

void write_matrix(std::ostream& out, const DenseMatrix& mat) {
  out << mat.rows() << ' ' << mat.cols() << '\n';
  for (std::size_t r = 0; r < mat.rows(); ++r) {
    for (std::size_t c = 0; c < mat.cols(); ++c) {
      if (c != 0) out << ' ';
      out << format_double(mat(r, c));
    }
    out << '\n';
  }
}

DenseMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  try {
    return read_matrix(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_matrix_file(const std::filesystem::path& path,
                       const DenseMatrix& mat) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  write_matrix(out, mat);
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

Permutation read_permutation(std::istream& in) {
  std::vector<std::size_t> map;
  std::string token;
  while (in >> token) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw std::runtime_error("permutation: cannot parse '" + token + "'");
    }
    map.push_back(v);
  }
  try {
    return Permutation(std::move(map));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("permutation: ") + e.what());
  }
}

void write_permutation(std::ostream& out, const Permutation& perm) {
  for (std::size_t i = 0; i < perm.size(); ++i) out << perm[i] << '\n';
}

void write_permutation_file(const std::filesystem::path& path,
                            const Permutation& perm) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  write_permutation(out, perm);
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace unshuffle
