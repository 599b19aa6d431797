#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "unshuffle/metrics.hpp"

using namespace unshuffle;
using namespace unshuffle::testing;

TEST_CASE("hamming_distance") {
  const auto id3 = Permutation::identity(3);
  CHECK(hamming_distance(id3, id3) == 0);
  CHECK(hamming_distance(Permutation({1, 0, 2}), id3) == 2);
  CHECK(hamming_distance(Permutation({1, 2, 0}), Permutation({2, 0, 1})) == 3);
  CHECK_THROWS_AS(hamming_distance(id3, Permutation::identity(4)), std::invalid_argument);
}

TEST_CASE("property: hamming_distance is a metric") {
  Rng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.below(12);
    const Permutation a = random_permutation(n, rng);
    const Permutation b = random_permutation(n, rng);
    const Permutation c = random_permutation(n, rng);
    CHECK(hamming_distance(a, a) == 0);
    CHECK((hamming_distance(a, b) == 0) == (a == b));
    CHECK(hamming_distance(a, b) == hamming_distance(b, a));
    CHECK(hamming_distance(a, c) <= hamming_distance(a, b) + hamming_distance(b, c));
  }
}

TEST_CASE("stable_rank examples") {
  CHECK(stable_rank(build_canonical_signal(50, 5)) == doctest::Approx(5.0).epsilon(1e-12));
  const DenseMatrix u = random_gaussian(7, 1, 1);
  const DenseMatrix v = random_gaussian(1, 4, 2);
  CHECK(stable_rank(naive_product(u, v)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(stable_rank(DenseMatrix::from_rows({{2, 0}, {0, 1}})) ==
        doctest::Approx(1.25).epsilon(1e-12));
  CHECK_THROWS_AS(stable_rank(DenseMatrix(3, 2)), std::invalid_argument);
}

TEST_CASE("property: 1 <= srank <= rank <= min(p, m)") {
  Rng rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t p = 1 + rng.below(8), m = 1 + rng.below(8);
    const std::size_t k = 1 + rng.below(std::min(p, m));
    // Rank-k product; rank counted from the singular values.
    const DenseMatrix b = naive_product(random_gaussian(p, k, rng.next()),
                                        random_gaussian(k, m, rng.next()));
    const Eigen::MatrixXd dense = b.values();
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(dense).singularValues();
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > 1e-10 * sv(0);
    const double sr = stable_rank(b);
    CHECK(sr >= 1.0 - 1e-12);
    CHECK(sr <= static_cast<double>(rank) + 1e-9);
    CHECK(rank <= std::min(p, m));
    CHECK(sr == doctest::Approx(dense.squaredNorm() / (sv(0) * sv(0))).epsilon(1e-10));
  }
}

TEST_CASE("operator norm: SVD and power iteration agree") {
  Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const DenseMatrix b = random_gaussian(1 + rng.below(40), 1 + rng.below(40), rng.next());
    const double svd = operator_norm_svd(b);
    CHECK(std::abs(operator_norm_power(b) - svd) <= 1e-8 * svd);
  }
  const DenseMatrix tall = random_gaussian(2100, 3, 5);
  CHECK(std::abs(operator_norm(tall) - operator_norm_svd(tall)) <=
        1e-8 * operator_norm_svd(tall));
}

TEST_CASE("snr and the noiseless marker") {
  const DenseMatrix b = build_canonical_signal(50, 5);
  CHECK(snr(b, 5, 1.0).value() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(snr(b, 5, 0.1).value() == doctest::Approx(100.0).epsilon(1e-12));
  const Snr quiet = snr(b, 5, 0.0);
  CHECK(quiet.is_noiseless());
  CHECK(quiet.to_string() == "inf");
  CHECK(Snr::finite(1e300) < quiet);
  CHECK(quiet > Snr::finite(0.0));
  CHECK(quiet == Snr::noiseless());
  CHECK_THROWS_AS(quiet.value(), std::logic_error);
  CHECK_THROWS_AS(snr(b, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(snr(b, 5, -1.0), std::invalid_argument);

  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const DenseMatrix r = random_gaussian(4, 3, rng.next());
    const double alpha = rng.uniform(0.1, 5.0), gamma = rng.uniform(0.1, 5.0);
    const double sigma = rng.uniform(0.1, 2.0);
    const double base = snr(r, 3, sigma).value();
    CHECK(snr(scaled(r, alpha), 3, sigma).value() ==
          doctest::Approx(alpha * alpha * base).epsilon(1e-12));
    CHECK(snr(r, 3, gamma * sigma).value() ==
          doctest::Approx(base / (gamma * gamma)).epsilon(1e-12));
  }
}

TEST_CASE("logdet_ratio") {
  for (std::size_t m : {1u, 3u, 5u}) {
    const DenseMatrix b = build_canonical_signal(10, m);
    for (std::size_t n : {10u, 500u, 100000u}) {
      const double expected = static_cast<double>(m) * std::log(2.0) /
                              std::log(static_cast<double>(n));
      CHECK(logdet_ratio(b, 1.0, n) == doctest::Approx(expected).epsilon(1e-13));
    }
  }
  const DenseMatrix b = build_canonical_signal(50, 5);
  CHECK(logdet_ratio(b, 1e6, 500) < 1e-6);
  CHECK_THROWS_AS(logdet_ratio(b, 0.0, 500), std::invalid_argument);
  CHECK_THROWS_AS(logdet_ratio(b, 1.0, 1), std::invalid_argument);

  // Equal singular values: logdet = srank * log(1 + snr).
  for (double sigma : {0.01, 0.3, 1.0, 7.0}) {
    for (double scale : {0.5, 1.0, 4.0}) {
      const DenseMatrix c = build_canonical_signal(20, 6, scale);
      const double sr = stable_rank(c);
      const double s = snr(c, 6, sigma).value();
      const double closed = sr * std::log1p(c.squared_frobenius_norm() / (sr * sigma * sigma));
      CHECK(std::abs(logdet_information(c, sigma) - closed) <= 1e-12 * closed);
      CHECK(std::abs(logdet_information(c, sigma) - sr * std::log1p(s)) <= 1e-12 * closed);
    }
  }
}

TEST_CASE("property: logdet monotone in sigma and in appended columns") {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t p = 2 + rng.below(6), m = 1 + rng.below(4);
    const DenseMatrix b = random_gaussian(p, m, rng.next());
    const double s1 = rng.uniform(0.1, 2.0);
    const double s2 = s1 * rng.uniform(1.01, 3.0);
    CHECK(logdet_information(b, s2) < logdet_information(b, s1));

    const DenseMatrix extra = random_gaussian(p, 1, rng.next());
    std::vector<double> wider;
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < m; ++j) wider.push_back(b(i, j));
      wider.push_back(extra(i, 0));
    }
    CHECK(logdet_information(DenseMatrix(p, m + 1, wider), s1) >
          logdet_information(b, s1));
  }
}

TEST_CASE("minimax threshold uses log-gamma") {
  CHECK(minimax_logdet_threshold(5) == doctest::Approx((std::log(120.0) - 2.0) / 5.0));
  // Stable for very large n, close to log n - 1.
  const double big = minimax_logdet_threshold(1000000);
  CHECK(std::isfinite(big));
  CHECK(big == doctest::Approx(std::log(1e6) - 1.0).epsilon(1e-4));
}

TEST_CASE("classify_regime") {
  CHECK(classify_regime(1.5, 1000) == Regime::unknown);
  const double edge = std::pow(std::log(100.0), 4);
  CHECK(classify_regime(edge, 100) == Regime::easy);
  CHECK(classify_regime(std::nextafter(edge, 0.0), 100) == Regime::medium);
  CHECK(classify_regime(5.0, 1000000) == Regime::hard);
  CHECK(classify_regime(std::log(1e6), 1000000) == Regime::medium);
  CHECK(classify_regime(2.0, 1000000) == Regime::hard);
  CHECK(classify_regime(2.5, 1000000, RegimeThresholds{3.0}) == Regime::unknown);
  CHECK(to_string(Regime::easy) == "easy");
}

TEST_CASE("relative_signal_error") {
  const DenseMatrix b = random_gaussian(4, 3, 8);
  CHECK(relative_signal_error(b, b) == 0.0);
  CHECK(relative_signal_error(scaled(b, 2.0), b) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(relative_signal_error(DenseMatrix(4, 3), b) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(relative_signal_error(DenseMatrix(3, 3), b), std::invalid_argument);
  CHECK_THROWS_AS(relative_signal_error(b, DenseMatrix(4, 3)), std::invalid_argument);
}
