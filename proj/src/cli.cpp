#include "unshuffle/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "unshuffle/config.hpp"
#include "unshuffle/estimators.hpp"
#include "unshuffle/experiments.hpp"
#include "unshuffle/matrix_io.hpp"
#include "unshuffle/metrics.hpp"

namespace unshuffle {

namespace {

struct SolveArgs {
  std::string x_path, y_path, perm_path, b_path;
};

struct SimulateArgs {
  std::string config_path, out_path;
  std::size_t threads = 1;
};

struct DemoArgs {
  std::size_t n = 1000;
  std::size_t iters = 100;
  std::optional<std::size_t> h;
  std::string out_path;
};

struct DiagnoseArgs {
  std::string b_path;
  double sigma = 0.0;
  std::size_t n = 0;
  std::optional<std::size_t> m;
};

std::string fmt(double v) {
  char buf[64];
  const int len = std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

int cmd_solve(const SolveArgs& args, std::ostream& err) {
  DenseMatrix x, y;
  try {
    x = read_matrix_file(args.x_path);
    y = read_matrix_file(args.y_path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  if (x.rows() != y.rows()) {
    err << "error: " << args.x_path << " has " << x.rows() << " rows but "
        << args.y_path << " has " << y.rows() << '\n';
    return kExitRuntime;
  }
  if (x.rows() < x.cols()) {
    err << "error: need n >= p, got n = " << x.rows() << ", p = " << x.cols()
        << '\n';
    return kExitRuntime;
  }
  try {
    const EstimationResult est = one_step_estimate(x, y);
    write_permutation_file(args.perm_path, est.perm_hat);
    write_matrix_file(args.b_path, est.b_hat);
    err << "solved n=" << x.rows() << " p=" << x.cols() << " m=" << y.cols()
        << " objective=" << fmt(est.objective) << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_simulate(const SimulateArgs& args, std::optional<std::uint64_t> seed,
                 std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  try {
    config = parse_config_file(args.config_path);
  } catch (const ConfigError& e) {
    err << "error: " << args.config_path << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  if (seed) config.master_seed = *seed;
  try {
    const SweepResult result = run_sweep(config, args.threads);
    write_csv(std::filesystem::path(args.out_path), result);
    for (const SweepRow& row : result.rows) {
      out << "snr=" << row.snr.to_string() << " sigma=" << fmt(row.sigma)
          << " logdet_ratio=" << fmt(row.logdet_ratio)
          << " recovery_rate=" << fmt(row.recovery_rate)
          << " mean_hamming=" << fmt(row.mean_hamming)
          << " failed=" << row.failed << '\n';
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_demo_failure(const DemoArgs& args, std::uint64_t seed,
                     std::ostream& out, std::ostream& err) {
  if (args.n < 100) {
    err << "error: --n must be >= 100\n";
    return kExitUsage;
  }
  if (args.h && (*args.h == 1 || *args.h > args.n)) {
    err << "error: --h must be 0 or in [2, n]\n";
    return kExitUsage;
  }
  try {
    const auto trace = reproduce_failure_demo(args.n, args.iters, seed, args.h);
    if (args.out_path.empty()) {
      write_trace_csv(out, trace);
    } else {
      std::ofstream file(args.out_path);
      if (!file) {
        err << "error: cannot write '" << args.out_path << "'\n";
        return kExitRuntime;
      }
      write_trace_csv(file, trace);
    }
    err << "initial hamming=" << trace.front().hamming
        << " final hamming=" << trace.back().hamming << " of n=" << args.n
        << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_diagnose(const DiagnoseArgs& args, std::ostream& out,
                 std::ostream& err) {
  if (!(args.sigma >= 0.0) || !std::isfinite(args.sigma)) {
    err << "error: --sigma must be >= 0\n";
    return kExitUsage;
  }
  if (args.n < 3) {
    err << "error: --n must be >= 3\n";
    return kExitUsage;
  }
  DenseMatrix b;
  try {
    b = read_matrix_file(args.b_path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  const std::size_t m = args.m.value_or(b.cols());
  if (m != b.cols()) {
    err << "error: --m " << m << " does not match B with " << b.cols()
        << " columns\n";
    return kExitUsage;
  }
  if (b.squared_frobenius_norm() == 0.0) {
    err << "error: B is the zero matrix\n";
    return kExitRuntime;
  }

  const double srank = stable_rank(b);
  const Snr s = snr(b, m, args.sigma);
  const double threshold = minimax_logdet_threshold(args.n);
  out << "srank: " << fmt(srank) << '\n';
  out << "snr: " << s.to_string() << '\n';
  out << "minimax_threshold: " << fmt(threshold) << '\n';
  if (s.is_noiseless()) {
    out << "logdet: noiseless\n";
    out << "logdet_ratio: skipped (noiseless)\n";
  } else {
    const double logdet = logdet_information(b, args.sigma);
    out << "logdet: " << fmt(logdet) << '\n';
    out << "logdet_ratio: "
        << fmt(logdet / std::log(static_cast<double>(args.n))) << '\n';
    if (logdet < threshold) {
      out << "below minimax threshold: recovery information-theoretically "
             "unreliable\n";
    } else {
      out << "above minimax threshold\n";
    }
    if (m == 1) {
      // Single-observation bound: failure for some delta in (0, 2) exactly
      // when 2 + log(1 + snr) < 2 log n.
      const double lhs = 2.0 + std::log1p(s.value());
      const double rhs = 2.0 * std::log(static_cast<double>(args.n));
      out << "single_observation_bound: "
          << (lhs < rhs ? "snr below n^c requirement" : "satisfied") << '\n';
    }
  }
  out << "regime: " << to_string(classify_regime(srank, args.n)) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Linear regression with shuffled labels: one-step estimator"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Estimate (Pi, B) from X and Y");
  solve_cmd->add_option("--x", solve.x_path, "Design matrix file (n x p)")->required();
  solve_cmd->add_option("--y", solve.y_path, "Observation matrix file (n x m)")->required();
  solve_cmd->add_option("--out-perm", solve.perm_path, "Permutation output")->required();
  solve_cmd->add_option("--out-b", solve.b_path, "Signal estimate output")->required();
  solve_cmd->add_option("--seed", seed, "Accepted for uniformity; solve is deterministic");

  SimulateArgs simulate;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a Monte-Carlo sweep");
  sim_cmd->add_option("--config", simulate.config_path, "Experiment config file")->required();
  sim_cmd->add_option("--out", simulate.out_path, "CSV output path")->required();
  sim_cmd->add_option("--threads", simulate.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", seed, "Override master_seed");

  DemoArgs demo;
  std::uint64_t demo_seed = 1;
  auto* demo_cmd = app.add_subcommand(
      "demo-failure", "Alternating minimization on the p = 2, m = 1 failure case");
  demo_cmd->add_option("--n", demo.n, "Sample count (>= 100)")->capture_default_str();
  demo_cmd->add_option("--iters", demo.iters, "Iterations")->capture_default_str();
  demo_cmd->set_help_flag("--help", "Print this help message and exit");
  demo_cmd->add_option("--h", demo.h, "Displaced rows (default n, a full shuffle)");
  demo_cmd->add_option("--seed", demo_seed, "Instance seed")->capture_default_str();
  demo_cmd->add_option("--out", demo.out_path, "Trace CSV output (default stdout)");

  DiagnoseArgs diag;
  auto* diag_cmd = app.add_subcommand("diagnose", "Recoverability diagnostics for B");
  diag_cmd->add_option("--b", diag.b_path, "Signal matrix file (p x m)")->required();
  diag_cmd->add_option("--sigma", diag.sigma, "Noise standard deviation")->required();
  diag_cmd->add_option("--n", diag.n, "Sample count")->required();
  diag_cmd->add_option("--m", diag.m, "Measurement count (defaults to B columns)");
  diag_cmd->add_option("--seed", seed, "Accepted for uniformity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  if (*solve_cmd) return cmd_solve(solve, err);
  if (*sim_cmd) return cmd_simulate(simulate, seed, out, err);
  if (*demo_cmd) return cmd_demo_failure(demo, demo_seed, out, err);
  if (*diag_cmd) return cmd_diagnose(diag, out, err);
  return kExitUsage;
}

}  // namespace unshuffle
