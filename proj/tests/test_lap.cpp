#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "unshuffle/instrumentation.hpp"
#include "unshuffle/lap.hpp"

using namespace unshuffle;
using namespace unshuffle::testing;

TEST_CASE("lap on small hand-checked matrices") {
  const DenseMatrix c = DenseMatrix::from_rows({{2, 1}, {1, 3}});
  const Assignment a = lap_maximize(c);
  CHECK(a.perm.is_identity());
  CHECK(a.objective == 5.0);
  const Assignment bf = lap_brute_force(c);
  CHECK(bf.perm.is_identity());
  CHECK(bf.objective == 5.0);

  const Assignment one = lap_brute_force(DenseMatrix::from_rows({{7}}));
  CHECK(one.perm.is_identity());
  CHECK(one.objective == 7.0);
  CHECK(lap_maximize(DenseMatrix::from_rows({{7}})).objective == 7.0);

  const DenseMatrix off = DenseMatrix::from_rows({{0, 1}, {1, 0}});
  CHECK(lap_brute_force(off).perm == Permutation({1, 0}));
  CHECK(lap_brute_force(off).objective == 2.0);
  CHECK(lap_maximize(off).perm == Permutation({1, 0}));

  CHECK(lap_maximize(DenseMatrix(0, 0)).perm.size() == 0);
}

TEST_CASE("lap errors") {
  CHECK_THROWS_AS(lap_maximize(DenseMatrix(2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(lap_brute_force(DenseMatrix(3, 2)), std::invalid_argument);
  CHECK_THROWS_AS(lap_brute_force(DenseMatrix(11, 11)), std::invalid_argument);
  // NaN cannot reach the solver: the cost matrix refuses it on construction.
  CHECK_THROWS_AS(DenseMatrix(2, 2, {1.0, std::nan(""), 0.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("ties resolve to the lexicographically smallest optimum") {
  // Everything ties: identity is the smallest index map.
  CHECK(lap_maximize(DenseMatrix(5, 5)).perm.is_identity());
  std::vector<double> ones(36, 1.0);
  CHECK(lap_maximize(DenseMatrix(6, 6, ones)).perm.is_identity());

  // Integer costs with many ties, checked against the brute-force order.
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.below(7);
    std::vector<double> v(n * n);
    for (double& e : v) e = static_cast<double>(rng.below(3));
    const DenseMatrix c(n, n, v);
    const Assignment fast = lap_maximize(c);
    const Assignment slow = lap_brute_force(c);
    CHECK(fast.objective == slow.objective);
    CHECK(fast.perm == slow.perm);
  }
}

TEST_CASE("lap_maximize matches brute force on random Gaussian costs") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const DenseMatrix c = random_gaussian(6, 6, 500 + s);
    const Assignment fast = lap_maximize(c);
    const Assignment slow = lap_brute_force(c);
    CHECK(fast.objective == slow.objective);
    CHECK(fast.perm == slow.perm);
    CHECK(fast.objective == assignment_objective(c, fast.perm));
  }
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    const DenseMatrix c = random_gaussian(n, n, rng.next());
    CHECK(lap_maximize(c).objective == lap_brute_force(c).objective);
  }
}

TEST_CASE("affine transforms of the cost keep the argmax") {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(30);
    const DenseMatrix c = random_gaussian(n, n, rng.next());
    const double alpha = rng.uniform(0.1, 10.0);
    const double beta = rng.uniform(-5.0, 5.0);
    std::vector<double> shifted(c.data().begin(), c.data().end());
    for (double& v : shifted) v = alpha * v + beta;
    CHECK(lap_maximize(c).perm == lap_maximize(DenseMatrix(n, n, shifted)).perm);
  }
}

TEST_CASE("optimality certificate against random alternatives") {
  Rng rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 40;
    const DenseMatrix c = random_gaussian(n, n, rng.next());
    const Assignment a = lap_maximize(c);
    for (int k = 0; k < 1000; ++k) {
      CHECK(a.objective >= assignment_objective(c, random_permutation(n, rng)));
    }
  }
}

TEST_CASE("row-permuting the cost composes the optimum") {
  Rng rng(123);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.below(40);
    const DenseMatrix c = random_gaussian(n, n, rng.next());
    const Permutation rho = random_permutation(n, rng);
    const DenseMatrix moved = apply_permutation(rho, c);
    const Assignment base = lap_maximize(c);
    const Assignment after = lap_maximize(moved);
    // Row i of `moved` is row rho(i) of c, so pi' = pi o rho.
    std::vector<std::size_t> composed(n);
    for (std::size_t i = 0; i < n; ++i) composed[i] = base.perm[rho[i]];
    CHECK(after.perm == Permutation(composed));
    CHECK(after.objective == doctest::Approx(base.objective).epsilon(1e-12));
  }
}

TEST_CASE("lap_maximize counts its solves") {
  thread_solve_counters().reset();
  lap_maximize(random_gaussian(4, 4, 1));
  lap_maximize(random_gaussian(4, 4, 2));
  CHECK(thread_solve_counters().lap_solves == 2);
  lap_brute_force(random_gaussian(4, 4, 1));
  CHECK(thread_solve_counters().lap_solves == 2);
}

TEST_CASE("runtime grows no faster than cubically") {
  auto median_ms = [](std::size_t n) {
    std::vector<double> times;
    for (std::uint64_t s = 0; s < 5; ++s) {
      const DenseMatrix c = random_gaussian(n, n, 7000 + s);
      const auto t0 = std::chrono::steady_clock::now();
      lap_maximize(c);
      times.push_back(std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count());
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
  };
  const double small = median_ms(150);
  const double large = median_ms(300);
  CAPTURE(small);
  CAPTURE(large);
  CHECK(large <= 10.0 * std::max(small, 0.05));
}
