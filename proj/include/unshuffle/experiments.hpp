#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unshuffle/matrix.hpp"
#include "unshuffle/metrics.hpp"
#include "unshuffle/model.hpp"

namespace unshuffle {

enum class EstimatorKind { one_step, oracle_perm, alt_min };
std::string_view to_string(EstimatorKind kind);
EstimatorKind parse_estimator(std::string_view name);

struct ExperimentConfig {
  std::size_t n = 500;
  std::size_t p = 50;
  std::size_t m = 50;
  std::size_t h = 50;
  Distribution dist = Distribution::gaussian;
  double signal_scale = 1.0;  // canonical signal, columns scale * e_i
  bool normalize_variance = false;
  std::vector<Snr> snr_grid;  // ascending; may end with the noiseless marker
  std::size_t trials = 100;
  std::uint64_t master_seed = 1;
  EstimatorKind estimator = EstimatorKind::one_step;
  std::size_t alt_min_iters = 100;  // used by EstimatorKind::alt_min
};

// Throws std::invalid_argument describing the first violated constraint.
void validate(const ExperimentConfig& config);

// k points spaced evenly in log10 between 10^lo and 10^hi.
std::vector<Snr> logspace_grid(double lo, double hi, std::size_t k);

// sigma with snr(b, m, sigma) == target.
double sigma_for_snr(const DenseMatrix& b, std::size_t m, double target_snr);

// Instance seed for a grid point and trial:
// derive_seed(master_seed, grid_index, trial_index).
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t grid_index,
                         std::size_t trial_index);

struct TrialResult {
  bool exact = false;
  std::size_t hamming = 0;
  double rel_b_error = 0.0;
  double runtime_ms = 0.0;
  bool failed = false;  // estimator threw; excluded from aggregates
  std::string error;
};

TrialResult run_trial(const ExperimentConfig& config, std::size_t grid_index,
                      std::size_t trial_index);

struct SweepRow {
  std::size_t n = 0, p = 0, m = 0, h = 0;
  Distribution dist = Distribution::gaussian;
  EstimatorKind estimator = EstimatorKind::one_step;
  Snr snr = Snr::noiseless();
  double sigma = 0.0;
  // Infinite for the noiseless point.
  double logdet_ratio = 0.0;
  double recovery_rate = 0.0;
  double mean_hamming = 0.0;
  double mean_rel_b_error = 0.0;
  std::size_t trials = 0;  // configured trials at this point
  std::size_t failed = 0;  // not part of the CSV
  std::uint64_t seed = 0;  // master seed
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

// One row per grid point, in grid order. Trials run on `threads` workers;
// the result does not depend on the thread count.
SweepResult run_sweep(const ExperimentConfig& config, std::size_t threads = 1);

// CSV with header
// n,p,m,h,dist,estimator,snr,sigma,logdet_ratio,recovery_rate,mean_hamming,
// mean_rel_b_error,trials,seed
// Reals use 12 significant digits; infinite snr/logdet_ratio print "inf".
void write_csv(std::ostream& out, const SweepResult& result);
void write_csv(const std::filesystem::path& path, const SweepResult& result);
SweepResult read_csv(std::istream& in);

inline constexpr std::string_view kCsvHeader =
    "n,p,m,h,dist,estimator,snr,sigma,logdet_ratio,recovery_rate,mean_hamming,"
    "mean_rel_b_error,trials,seed";

struct FailureTraceRow {
  std::size_t iteration = 0;
  std::size_t hamming = 0;
  double residual = 0.0;
};

// Noiseless p = 2, m = 1 instance with beta = [1000; 1000] and a Gaussian
// design, fully shuffled unless `h` is given. Iteration 0 is the one-step
// estimate; iterations 1..max_iters are alternating-minimization updates.
// Once the permutation stops changing, the remaining rows repeat that fixed
// point.
std::vector<FailureTraceRow> reproduce_failure_demo(
    std::size_t n, std::size_t max_iters, std::uint64_t seed,
    std::optional<std::size_t> h = std::nullopt);

void write_trace_csv(std::ostream& out,
                     const std::vector<FailureTraceRow>& trace);

}  // namespace unshuffle
