#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "unshuffle/matrix.hpp"
#include "unshuffle/permutation.hpp"

namespace unshuffle {

// Entry law of the design matrix; entries are always drawn i.i.d.
enum class Distribution {
  gaussian,    // N(0, 1)
  uniform,     // U[-1, 1], variance 1/3 unless normalized
  rademacher,  // +-1 with probability 1/2
};

bool is_log_concave(Distribution dist);
std::string_view to_string(Distribution dist);
// Accepts "gaussian", "uniform", "rademacher". Throws std::invalid_argument.
Distribution parse_distribution(std::string_view name);

struct DesignOptions {
  // Rescale U[-1, 1] draws by sqrt(3) so the design is isotropic. Off by
  // default; the unscaled law is what the reference experiments use.
  bool normalize_variance = false;
};

DenseMatrix sample_design_matrix(std::size_t n, std::size_t p,
                                 Distribution dist, std::uint64_t seed,
                                 DesignOptions options = {});

// Uniform over permutations of {0..n-1} with exactly h non-fixed points:
// an h-subset is drawn uniformly, then a uniform derangement of it by
// rejection. h == 1 is impossible and rejected.
Permutation sample_permutation_with_hamming_weight(std::size_t n,
                                                   std::size_t h,
                                                   std::uint64_t seed);

// p x m matrix whose column i is scale * e_i for i < min(p, m), zero
// elsewhere.
DenseMatrix build_canonical_signal(std::size_t p, std::size_t m,
                                   double scale = 1.0);

struct ProblemInstance {
  DenseMatrix x;       // n x p
  DenseMatrix b_true;  // p x m
  Permutation perm_true;
  double noise_sigma = 0.0;
  DenseMatrix y;  // n x m
  std::uint64_t seed = 0;
  Distribution dist = Distribution::gaussian;
  std::size_t h = 0;

  std::size_t n() const { return x.rows(); }
  std::size_t p() const { return x.cols(); }
  std::size_t m() const { return y.cols(); }
};

// Y = Pi X B + W with W_ij ~ N(0, sigma^2). The design, permutation and
// noise come from independent sub-streams of `seed`.
ProblemInstance synthesize_instance(std::size_t n, std::size_t p,
                                    std::size_t m, std::size_t h,
                                    Distribution dist,
                                    const DenseMatrix& b_true, double sigma,
                                    std::uint64_t seed,
                                    DesignOptions options = {});

}  // namespace unshuffle
