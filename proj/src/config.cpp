#include "unshuffle/config.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <string_view>
#include <vector>

namespace unshuffle {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_top_level(const std::string& s) {
  // Commas inside logspace(...) do not separate entries.
  std::vector<std::string> parts;
  std::string current;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(trim(current));
  return parts;
}

double to_real(const std::string& key, const std::string& value) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("config key '" + key + "': expected a number, got '" +
                      value + "'");
  }
  return v;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& value) {
  Int v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("config key '" + key +
                      "': expected a non-negative integer, got '" + value + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config key '" + key + "': expected true/false, got '" +
                    value + "'");
}

std::vector<Snr> parse_grid(const std::string& value) {
  std::vector<Snr> grid;
  for (const std::string& part : split_top_level(value)) {
    if (part == "inf" || part == "noiseless") {
      grid.push_back(Snr::noiseless());
    } else if (part.rfind("logspace(", 0) == 0 && part.back() == ')') {
      const auto args = split_top_level(part.substr(9, part.size() - 10));
      if (args.size() != 3) {
        throw ConfigError("config key 'snr_grid': logspace takes (a,b,k)");
      }
      const auto k = to_int<std::size_t>("snr_grid", args[2]);
      if (k == 0) throw ConfigError("config key 'snr_grid': logspace k must be >= 1");
      for (const Snr& s : logspace_grid(to_real("snr_grid", args[0]),
                                        to_real("snr_grid", args[1]), k)) {
        grid.push_back(s);
      }
    } else {
      const double v = to_real("snr_grid", part);
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError("config key 'snr_grid': entries must be positive");
      }
      grid.push_back(Snr::finite(v));
    }
  }
  return grid;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  config.snr_grid.clear();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(stripped).substr(0, eq));
    const std::string value = trim(std::string_view(stripped).substr(eq + 1));

    try {
      if (key == "n") {
        config.n = to_int<std::size_t>(key, value);
      } else if (key == "p") {
        config.p = to_int<std::size_t>(key, value);
      } else if (key == "m") {
        config.m = to_int<std::size_t>(key, value);
      } else if (key == "h") {
        config.h = to_int<std::size_t>(key, value);
      } else if (key == "dist") {
        config.dist = parse_distribution(value);
      } else if (key == "signal") {
        if (value != "canonical") {
          throw ConfigError("config key 'signal': only 'canonical' is supported");
        }
      } else if (key == "signal_scale") {
        config.signal_scale = to_real(key, value);
      } else if (key == "normalize_variance") {
        config.normalize_variance = to_bool(key, value);
      } else if (key == "snr_grid") {
        config.snr_grid = parse_grid(value);
      } else if (key == "trials") {
        config.trials = to_int<std::size_t>(key, value);
      } else if (key == "master_seed" || key == "seed") {
        config.master_seed = to_int<std::uint64_t>(key, value);
      } else if (key == "estimator") {
        config.estimator = parse_estimator(value);
      } else if (key == "alt_min_iters") {
        config.alt_min_iters = to_int<std::size_t>(key, value);
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
  if (config.snr_grid.empty()) {
    throw ConfigError("config key 'snr_grid' is required");
  }
  try {
    validate(config);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return config;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return parse_config(in);
}

}  // namespace unshuffle
