#include "unshuffle/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "unshuffle/random.hpp"

namespace unshuffle {

bool is_log_concave(Distribution dist) {
  return dist != Distribution::rademacher;
}

std::string_view to_string(Distribution dist) {
  switch (dist) {
    case Distribution::gaussian:
      return "gaussian";
    case Distribution::uniform:
      return "uniform";
    case Distribution::rademacher:
      return "rademacher";
  }
  return "unknown";
}

Distribution parse_distribution(std::string_view name) {
  if (name == "gaussian") return Distribution::gaussian;
  if (name == "uniform") return Distribution::uniform;
  if (name == "rademacher") return Distribution::rademacher;
  throw std::invalid_argument("unknown distribution '" + std::string(name) +
                              "' (expected gaussian, uniform or rademacher)");
}

DenseMatrix sample_design_matrix(std::size_t n, std::size_t p,
                                 Distribution dist, std::uint64_t seed,
                                 DesignOptions options) {
  if (n == 0 || p == 0) {
    throw std::invalid_argument("sample_design_matrix: zero dimension");
  }
  Rng rng(seed);
  RowMajorMatrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  const double uniform_scale = options.normalize_variance ? std::sqrt(3.0) : 1.0;
  double* out = x.data();
  for (std::size_t k = 0; k < n * p; ++k) {
    switch (dist) {
      case Distribution::gaussian:
        out[k] = rng.normal();
        break;
      case Distribution::uniform:
        out[k] = uniform_scale * rng.uniform(-1.0, 1.0);
        break;
      case Distribution::rademacher:
        out[k] = rng.rademacher();
        break;
    }
  }
  return DenseMatrix(std::move(x));
}

Permutation sample_permutation_with_hamming_weight(std::size_t n,
                                                   std::size_t h,
                                                   std::uint64_t seed) {
  if (h > n) {
    throw std::invalid_argument(
        "sample_permutation_with_hamming_weight: h exceeds n");
  }
  if (h == 1) {
    throw std::invalid_argument(
        "sample_permutation_with_hamming_weight: no permutation displaces "
        "exactly one index");
  }
  Rng rng(seed);

  // Partial Fisher-Yates: the first h entries are a uniform h-subset.
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < h; ++i) {
    const std::size_t j = i + rng.below(n - i);
    std::swap(pool[i], pool[j]);
  }
  std::vector<std::size_t> subset(pool.begin(),
                                  pool.begin() + static_cast<std::ptrdiff_t>(h));
  std::sort(subset.begin(), subset.end());

  // Uniform derangement of the subset; acceptance probability -> 1/e.
  std::vector<std::size_t> order(h);
  bool deranged = false;
  while (!deranged) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = h; i > 1; --i) {
      std::swap(order[i - 1], order[rng.below(i)]);
    }
    deranged = true;
    for (std::size_t i = 0; i < h; ++i) {
      if (order[i] == i) {
        deranged = false;
        break;
      }
    }
  }

  std::vector<std::size_t> map(n);
  std::iota(map.begin(), map.end(), std::size_t{0});
  for (std::size_t k = 0; k < h; ++k) map[subset[k]] = subset[order[k]];
  return Permutation(std::move(map));
}

DenseMatrix build_canonical_signal(std::size_t p, std::size_t m, double scale) {
  if (p == 0 || m == 0) {
    throw std::invalid_argument("build_canonical_signal: zero dimension");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("build_canonical_signal: scale must be > 0");
  }
  RowMajorMatrix b = RowMajorMatrix::Zero(static_cast<Eigen::Index>(p),
                                          static_cast<Eigen::Index>(m));
  const Eigen::Index k = static_cast<Eigen::Index>(std::min(p, m));
  for (Eigen::Index i = 0; i < k; ++i) b(i, i) = scale;
  return DenseMatrix(std::move(b));
}

ProblemInstance synthesize_instance(std::size_t n, std::size_t p,
                                    std::size_t m, std::size_t h,
                                    Distribution dist,
                                    const DenseMatrix& b_true, double sigma,
                                    std::uint64_t seed,
                                    DesignOptions options) {
  if (b_true.rows() != p || b_true.cols() != m) {
    throw std::invalid_argument(
        "synthesize_instance: b_true must be p x m");
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("synthesize_instance: sigma must be >= 0");
  }
  ProblemInstance inst;
  inst.x = sample_design_matrix(n, p, dist,
                                derive_seed(seed, StreamTag::design), options);
  inst.perm_true = sample_permutation_with_hamming_weight(
      n, h, derive_seed(seed, StreamTag::permutation));
  inst.b_true = b_true;
  inst.noise_sigma = sigma;
  inst.seed = seed;
  inst.dist = dist;
  inst.h = h;

  RowMajorMatrix signal = inst.x.values() * b_true.values();
  RowMajorMatrix y =
      apply_permutation(inst.perm_true, DenseMatrix(std::move(signal))).values();
  if (sigma > 0.0) {
    Rng rng(derive_seed(seed, StreamTag::noise));
    double* out = y.data();
    for (Eigen::Index k = 0; k < y.size(); ++k) out[k] += sigma * rng.normal();
  }
  inst.y = DenseMatrix(std::move(y));
  return inst;
}

}  // namespace unshuffle
