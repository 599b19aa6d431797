#include "unshuffle/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "unshuffle/estimators.hpp"
#include "unshuffle/random.hpp"

namespace unshuffle {

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::one_step:
      return "one_step";
    case EstimatorKind::oracle_perm:
      return "oracle_perm";
    case EstimatorKind::alt_min:
      return "alt_min";
  }
  return "unknown";
}

EstimatorKind parse_estimator(std::string_view name) {
  if (name == "one_step") return EstimatorKind::one_step;
  if (name == "oracle_perm") return EstimatorKind::oracle_perm;
  if (name == "alt_min") return EstimatorKind::alt_min;
  throw std::invalid_argument("unknown estimator '" + std::string(name) +
                              "' (expected one_step, oracle_perm or alt_min)");
}

void validate(const ExperimentConfig& config) {
  if (config.n == 0 || config.p == 0 || config.m == 0) {
    throw std::invalid_argument("n, p and m must be positive");
  }
  if (config.n < config.p) throw std::invalid_argument("n must be >= p");
  if (config.h == 1) throw std::invalid_argument("h must not be 1");
  if (config.h > config.n) throw std::invalid_argument("h must be <= n");
  if (config.trials == 0) throw std::invalid_argument("trials must be >= 1");
  if (!(config.signal_scale > 0.0) || !std::isfinite(config.signal_scale)) {
    throw std::invalid_argument("signal_scale must be > 0");
  }
  if (config.snr_grid.empty()) {
    throw std::invalid_argument("snr_grid must not be empty");
  }
  for (std::size_t i = 0; i < config.snr_grid.size(); ++i) {
    const Snr& s = config.snr_grid[i];
    if (!s.is_noiseless() && !(s.value() > 0.0)) {
      throw std::invalid_argument("snr_grid entries must be positive");
    }
    if (i > 0 && !(config.snr_grid[i - 1] < s)) {
      throw std::invalid_argument("snr_grid must be strictly ascending");
    }
  }
  if (config.estimator == EstimatorKind::alt_min && config.alt_min_iters == 0) {
    throw std::invalid_argument("alt_min_iters must be >= 1");
  }
}

std::vector<Snr> logspace_grid(double lo, double hi, std::size_t k) {
  if (k == 0) throw std::invalid_argument("logspace_grid: k must be >= 1");
  std::vector<Snr> grid;
  grid.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double t = k == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(k - 1);
    grid.push_back(Snr::finite(std::pow(10.0, lo + (hi - lo) * t)));
  }
  return grid;
}

double sigma_for_snr(const DenseMatrix& b, std::size_t m, double target_snr) {
  if (!(target_snr > 0.0) || !std::isfinite(target_snr)) {
    throw std::invalid_argument("sigma_for_snr: target must be positive");
  }
  if (m == 0) throw std::invalid_argument("sigma_for_snr: m must be positive");
  const double energy = b.squared_frobenius_norm();
  if (energy == 0.0) throw std::invalid_argument("sigma_for_snr: zero signal");
  return std::sqrt(energy / (static_cast<double>(m) * target_snr));
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t grid_index,
                         std::size_t trial_index) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(grid_index),
                     static_cast<std::uint64_t>(trial_index));
}

namespace {

double point_sigma(const ExperimentConfig& config, const DenseMatrix& b,
                   const Snr& point) {
  return point.is_noiseless() ? 0.0 : sigma_for_snr(b, config.m, point.value());
}

}  // namespace

TrialResult run_trial(const ExperimentConfig& config, std::size_t grid_index,
                      std::size_t trial_index) {
  if (grid_index >= config.snr_grid.size()) {
    throw std::out_of_range("run_trial: grid index out of range");
  }
  const DenseMatrix b = build_canonical_signal(config.p, config.m, config.signal_scale);
  const double sigma = point_sigma(config, b, config.snr_grid[grid_index]);
  const ProblemInstance inst = synthesize_instance(
      config.n, config.p, config.m, config.h, config.dist, b, sigma,
      trial_seed(config.master_seed, grid_index, trial_index),
      DesignOptions{config.normalize_variance});

  TrialResult result;
  const auto start = std::chrono::steady_clock::now();
  try {
    Permutation perm;
    DenseMatrix b_hat;
    switch (config.estimator) {
      case EstimatorKind::one_step: {
        EstimationResult est = one_step_estimate(inst.x, inst.y);
        perm = std::move(est.perm_hat);
        b_hat = std::move(est.b_hat);
        break;
      }
      case EstimatorKind::oracle_perm:
        perm = oracle_permutation_estimate(inst.x, inst.y, inst.b_true);
        b_hat = least_squares_signal(inst.x, inst.y, perm);
        break;
      case EstimatorKind::alt_min: {
        const EstimationResult init = one_step_estimate(inst.x, inst.y);
        AltMinResult est = alternating_minimization(
            inst.x, inst.y, init.perm_hat, init.b_hat, config.alt_min_iters);
        perm = std::move(est.estimate.perm_hat);
        b_hat = std::move(est.estimate.b_hat);
        break;
      }
    }
    result.hamming = hamming_distance(perm, inst.perm_true);
    result.exact = result.hamming == 0;
    result.rel_b_error = relative_signal_error(b_hat, inst.b_true);
  } catch (const std::exception& e) {
    result.failed = true;
    result.error = e.what();
  }
  result.runtime_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return result;
}

SweepResult run_sweep(const ExperimentConfig& config, std::size_t threads) {
  validate(config);
  const std::size_t points = config.snr_grid.size();
  const std::size_t total = points * config.trials;
  std::vector<TrialResult> trials(total);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next.fetch_add(1); k < total; k = next.fetch_add(1)) {
      trials[k] = run_trial(config, k / config.trials, k % config.trials);
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, total);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  const DenseMatrix b = build_canonical_signal(config.p, config.m, config.signal_scale);
  SweepResult result;
  result.rows.reserve(points);
  for (std::size_t g = 0; g < points; ++g) {
    SweepRow row;
    row.n = config.n;
    row.p = config.p;
    row.m = config.m;
    row.h = config.h;
    row.dist = config.dist;
    row.estimator = config.estimator;
    row.snr = config.snr_grid[g];
    row.sigma = point_sigma(config, b, row.snr);
    row.logdet_ratio = row.snr.is_noiseless()
                           ? std::numeric_limits<double>::infinity()
                           : logdet_ratio(b, row.sigma, config.n);
    row.trials = config.trials;
    row.seed = config.master_seed;

    std::size_t ok = 0, exact = 0;
    double hamming = 0.0, rel = 0.0;
    for (std::size_t t = 0; t < config.trials; ++t) {
      const TrialResult& tr = trials[g * config.trials + t];
      if (tr.failed) {
        ++row.failed;
        continue;
      }
      ++ok;
      exact += tr.exact;
      hamming += static_cast<double>(tr.hamming);
      rel += tr.rel_b_error;
    }
    if (ok > 0) {
      const double denom = static_cast<double>(ok);
      row.recovery_rate = static_cast<double>(exact) / denom;
      row.mean_hamming = hamming / denom;
      row.mean_rel_b_error = rel / denom;
    }
    result.rows.push_back(row);
  }
  return result;
}

namespace {

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
  (void)ec;
  return std::string(buf, ptr);
}

double parse_real(const std::string& field) {
  if (field == "inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw std::runtime_error("csv: cannot parse real '" + field + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(const std::string& field) {
  Int v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw std::runtime_error("csv: cannot parse integer '" + field + "'");
  }
  return v;
}

}  // namespace

void write_csv(std::ostream& out, const SweepResult& result) {
  out << kCsvHeader << '\n';
  for (const SweepRow& r : result.rows) {
    out << r.n << ',' << r.p << ',' << r.m << ',' << r.h << ','
        << to_string(r.dist) << ',' << to_string(r.estimator) << ','
        << r.snr.to_string() << ',' << format_real(r.sigma) << ','
        << format_real(r.logdet_ratio) << ',' << format_real(r.recovery_rate)
        << ',' << format_real(r.mean_hamming) << ','
        << format_real(r.mean_rel_b_error) << ',' << r.trials << ',' << r.seed
        << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const SweepResult& result) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  write_csv(out, result);
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

SweepResult read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("csv: missing or unexpected header");
  }
  SweepResult result;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() != 14) {
      throw std::runtime_error("csv: expected 14 fields, got " +
                               std::to_string(f.size()));
    }
    SweepRow r;
    r.n = parse_int<std::size_t>(f[0]);
    r.p = parse_int<std::size_t>(f[1]);
    r.m = parse_int<std::size_t>(f[2]);
    r.h = parse_int<std::size_t>(f[3]);
    r.dist = parse_distribution(f[4]);
    r.estimator = parse_estimator(f[5]);
    r.snr = f[6] == "inf" ? Snr::noiseless() : Snr::finite(parse_real(f[6]));
    r.sigma = parse_real(f[7]);
    r.logdet_ratio = parse_real(f[8]);
    r.recovery_rate = parse_real(f[9]);
    r.mean_hamming = parse_real(f[10]);
    r.mean_rel_b_error = parse_real(f[11]);
    r.trials = parse_int<std::size_t>(f[12]);
    r.seed = parse_int<std::uint64_t>(f[13]);
    result.rows.push_back(r);
  }
  return result;
}

std::vector<FailureTraceRow> reproduce_failure_demo(
    std::size_t n, std::size_t max_iters, std::uint64_t seed,
    std::optional<std::size_t> h) {
  if (n < 100) throw std::invalid_argument("reproduce_failure_demo: n must be >= 100");
  const DenseMatrix beta = DenseMatrix::from_rows({{1000.0}, {1000.0}});
  const ProblemInstance inst = synthesize_instance(
      n, 2, 1, h.value_or(n), Distribution::gaussian, beta, 0.0, seed);
  const EstimationResult init = one_step_estimate(inst.x, inst.y);
  const AltMinResult run = alternating_minimization(
      inst.x, inst.y, init.perm_hat, init.b_hat, max_iters, inst.perm_true);

  std::vector<FailureTraceRow> trace;
  trace.reserve(max_iters + 1);
  for (const AltMinStep& step : run.trace) {
    trace.push_back({step.iteration, *step.hamming, step.residual});
  }
  // A repeated permutation is a fixed point: every later update reproduces it.
  while (trace.size() < max_iters + 1) {
    FailureTraceRow row = trace.back();
    row.iteration = trace.size();
    trace.push_back(row);
  }
  return trace;
}

void write_trace_csv(std::ostream& out,
                     const std::vector<FailureTraceRow>& trace) {
  out << "iteration,hamming,residual\n";
  for (const FailureTraceRow& row : trace) {
    out << row.iteration << ',' << row.hamming << ',' << format_real(row.residual)
        << '\n';
  }
}

}  // namespace unshuffle
