#pragma once

#include "unshuffle/matrix.hpp"
#include "unshuffle/permutation.hpp"

namespace unshuffle {

struct Assignment {
  Permutation perm;
  double objective = 0.0;  // sum_i cost(i, perm[i]), summed in row order
};

// sum_i cost(i, perm[i]), accumulated in increasing i.
double assignment_objective(const DenseMatrix& cost, const Permutation& perm);

// Exact dense linear assignment, maximization form, O(n^3).
//
// Shortest-augmenting-path Hungarian method on the negated costs. Among
// optimal assignments the lexicographically smallest index map is returned:
// after the solve, the optimal duals identify the tight edges and the matching
// is walked row by row to the smallest column that still admits a perfect
// matching of tight edges. Comparisons are exact; no epsilon is applied.
Assignment lap_maximize(const DenseMatrix& cost);

// Exhaustive search over all n! permutations in lexicographic order, keeping
// the first maximum. Refuses n > 10.
Assignment lap_brute_force(const DenseMatrix& cost);

inline constexpr std::size_t kBruteForceMaxN = 10;

}  // namespace unshuffle
