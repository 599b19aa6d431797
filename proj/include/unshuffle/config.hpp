#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "unshuffle/experiments.hpp"

namespace unshuffle {

// A config problem the user must fix: unknown key, bad value, or a violated
// constraint.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat "key = value" text. Blank lines and '#' comments are ignored. Keys:
//   n, p, m, h, dist, signal, signal_scale, normalize_variance, snr_grid,
//   trials, master_seed, estimator, alt_min_iters
// snr_grid is a comma-separated list ("inf" or "noiseless" for sigma = 0),
// or logspace(a,b,k), optionally followed by ",inf".
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

}  // namespace unshuffle
