#include "unshuffle/lap.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "unshuffle/instrumentation.hpp"

namespace unshuffle {

SolveCounters& thread_solve_counters() {
  thread_local SolveCounters counters;
  return counters;
}

namespace {

void require_square(const DenseMatrix& cost, const char* who) {
  if (cost.rows() != cost.cols()) {
    throw std::invalid_argument(std::string(who) + ": cost matrix must be square, got " +
                                std::to_string(cost.rows()) + "x" +
                                std::to_string(cost.cols()));
  }
}

struct HungarianSolution {
  std::vector<std::size_t> row_to_col;
  std::vector<double> u;  // row potentials
  std::vector<double> v;  // column potentials
};

// Minimizes sum_i a(i, pi(i)) for a = -cost by successive shortest
// augmenting paths (Dijkstra on reduced costs a - u - v, potentials updated
// lazily once per augmentation). On return every edge satisfies
// a(i, j) - u[i] - v[j] >= 0 up to rounding, with equality on the matching.
HungarianSolution hungarian_min_negated(const RowMajorMatrix& cost) {
  const std::size_t n = static_cast<std::size_t>(cost.rows());
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<double> a(n * n);
  for (std::size_t k = 0; k < n * n; ++k) a[k] = -cost.data()[k];

  std::vector<double> u(n, 0.0), v(n, 0.0), dist(n);
  std::vector<std::size_t> row_to_col(n, none), col_to_row(n, none), pred(n);
  std::vector<std::size_t> todo(n), scanned;
  scanned.reserve(n);

  for (std::size_t free_row = 0; free_row < n; ++free_row) {
    const double* row = a.data() + free_row * n;
    for (std::size_t j = 0; j < n; ++j) {
      dist[j] = row[j] - u[free_row] - v[j];
      pred[j] = free_row;
      todo[j] = j;
    }
    std::size_t todo_size = n;
    scanned.clear();

    auto closer = [&](std::size_t j, std::size_t b) {
      return dist[j] < dist[b] || (dist[j] == dist[b] && j < b);
    };
    // Position in `todo` of the closest unscanned column.
    std::size_t best = 0;
    for (std::size_t k = 1; k < todo_size; ++k) {
      if (closer(todo[k], todo[best])) best = k;
    }

    std::size_t sink = none;
    double reach = 0.0;
    while (sink == none) {
      const std::size_t j = todo[best];
      todo[best] = todo[--todo_size];
      reach = dist[j];
      if (col_to_row[j] == none) {
        sink = j;
        break;
      }
      scanned.push_back(j);
      // Relax through the owner of j and find the next closest column in
      // the same pass.
      const std::size_t r = col_to_row[j];
      const double* rrow = a.data() + r * n;
      const double base = reach - u[r];
      best = 0;
      for (std::size_t k = 0; k < todo_size; ++k) {
        const std::size_t c = todo[k];
        const double through = base + rrow[c] - v[c];
        if (through < dist[c]) {
          dist[c] = through;
          pred[c] = r;
        }
        if (k > 0 && closer(c, todo[best])) best = k;
      }
    }

    u[free_row] += reach;
    for (std::size_t j : scanned) {
      const double shift = reach - dist[j];
      v[j] -= shift;
      u[col_to_row[j]] += shift;
    }
    for (std::size_t j = sink;;) {
      const std::size_t r = pred[j];
      const std::size_t previous = row_to_col[r];
      row_to_col[r] = j;
      col_to_row[j] = r;
      if (r == free_row) break;
      j = previous;
    }
  }

  return {std::move(row_to_col), std::move(u), std::move(v)};
}

// Lexicographically smallest perfect matching of the tight-edge graph,
// starting from the perfect matching `row_to_col` (whose edges are tight).
std::vector<std::size_t> lex_smallest_matching(
    const std::vector<std::vector<std::size_t>>& tight,
    std::vector<std::size_t> row_to_col) {
  const std::size_t n = row_to_col.size();
  std::vector<std::size_t> col_to_row(n);
  for (std::size_t i = 0; i < n; ++i) col_to_row[row_to_col[i]] = i;
  std::vector<char> col_fixed(n, 0);
  std::vector<std::size_t> parent_col(n);
  std::vector<char> visited(n);
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t target = row_to_col[i];
    for (std::size_t j : tight[i]) {
      if (col_fixed[j]) continue;
      if (j == target) break;
      // Look for an alternating cycle i -> j -> ... -> target through rows
      // that are not yet fixed. BFS over columns; parent_col[c] is the
      // column whose owner reached c.
      std::fill(visited.begin(), visited.end(), 0);
      std::deque<std::size_t> queue;
      visited[j] = 1;
      parent_col[j] = none;
      queue.push_back(j);
      bool found = false;
      while (!queue.empty() && !found) {
        const std::size_t c = queue.front();
        queue.pop_front();
        const std::size_t r = col_to_row[c];
        for (std::size_t next : tight[r]) {
          if (col_fixed[next] || visited[next]) continue;
          visited[next] = 1;
          parent_col[next] = c;
          if (next == target) {
            found = true;
            break;
          }
          queue.push_back(next);
        }
      }
      if (!found) continue;
      // Walk back from target: owner of parent_col[c] moves to c.
      std::size_t c = target;
      while (c != j) {
        const std::size_t prev = parent_col[c];
        const std::size_t r = col_to_row[prev];
        row_to_col[r] = c;
        col_to_row[c] = r;
        c = prev;
      }
      row_to_col[i] = j;
      col_to_row[j] = i;
      break;
    }
    col_fixed[row_to_col[i]] = 1;
  }
  return row_to_col;
}

}  // namespace

double assignment_objective(const DenseMatrix& cost, const Permutation& perm) {
  require_square(cost, "assignment_objective");
  if (perm.size() != cost.rows()) {
    throw std::invalid_argument("assignment_objective: size mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < perm.size(); ++i) total += cost(i, perm[i]);
  return total;
}

Assignment lap_maximize(const DenseMatrix& cost) {
  require_square(cost, "lap_maximize");
  ++thread_solve_counters().lap_solves;
  const std::size_t n = cost.rows();
  if (n == 0) return {Permutation::identity(0), 0.0};

  HungarianSolution sol = hungarian_min_negated(cost.values());

  std::vector<std::vector<std::size_t>> tight(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double reduced = -cost(i, j) - sol.u[i] - sol.v[j];
      if (j == sol.row_to_col[i] || reduced <= 0.0) tight[i].push_back(j);
    }
  }

  Permutation found(sol.row_to_col);
  const double found_objective = assignment_objective(cost, found);
  Permutation lex(lex_smallest_matching(tight, sol.row_to_col));
  const double lex_objective = assignment_objective(cost, lex);
  // The tie-break may only move between assignments that are at least as
  // good; a rounding artefact in the duals must never cost objective.
  if (lex_objective >= found_objective) return {std::move(lex), lex_objective};
  return {std::move(found), found_objective};
}

Assignment lap_brute_force(const DenseMatrix& cost) {
  require_square(cost, "lap_brute_force");
  const std::size_t n = cost.rows();
  if (n > kBruteForceMaxN) {
    throw std::invalid_argument("lap_brute_force: n = " + std::to_string(n) +
                                " exceeds " + std::to_string(kBruteForceMaxN));
  }
  std::vector<std::size_t> map(n);
  std::iota(map.begin(), map.end(), std::size_t{0});
  std::vector<std::size_t> best = map;
  double best_objective = -std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += cost(i, map[i]);
    if (total > best_objective) {
      best_objective = total;
      best = map;
    }
  } while (std::next_permutation(map.begin(), map.end()));
  return {Permutation(std::move(best)), n == 0 ? 0.0 : best_objective};
}

}  // namespace unshuffle
