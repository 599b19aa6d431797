#pragma once

#include <cstddef>

namespace unshuffle {

// Per-thread tallies of the expensive solves, so callers can confirm the
// work an estimator did. Counters only ever increase; reset() between
// measurements.
struct SolveCounters {
  std::size_t lap_solves = 0;
  std::size_t least_squares_solves = 0;

  void reset() { *this = SolveCounters{}; }
};

SolveCounters& thread_solve_counters();

}  // namespace unshuffle
