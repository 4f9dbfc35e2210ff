#include <doctest.h>

#include <cmath>
#include <vector>

#include "voss/stable.hpp"
#include "voss/stats.hpp"

using voss::AlphaSchedule;
using voss::Rng;

TEST_CASE("alpha = 1 increments are deterministic") {
  Rng rng({1, 0});
  for (double dt : {0.1, 1.0, 3.5}) {
    CHECK(voss::sample_stable_increment(1.0, dt, rng) == dt);
  }
  const auto unit = AlphaSchedule::constant(1.0, 2.0);
  CHECK(voss::sample_voss_at(unit, 1.3, rng) == doctest::Approx(1.3).epsilon(1e-15));
  const std::vector<double> grid{0.0, 1.0, 2.0};
  const auto path = voss::sample_voss_path(unit, grid, rng);
  CHECK(path.values == std::vector<double>{0.0, 1.0, 2.0});
}

TEST_CASE("alpha = 1/2 increments follow the Levy law") {
  Rng rng({2024, 3});
  std::vector<double> xs(20000);
  for (auto& x : xs) x = voss::sample_stable_increment(0.5, 1.0, rng);
  for (double x : xs) CHECK(x > 0.0);
  const auto ks = voss::stats::ks_one_sample(std::move(xs), [](double x) {
    return x <= 0.0 ? 0.0 : std::erfc(0.5 / std::sqrt(x));
  });
  CHECK(ks.p_value >= 0.001);
}

TEST_CASE("Laplace transform of increments matches exp(-dt w^alpha)") {
  for (double alpha : {0.3, 0.6, 0.85}) {
    Rng rng({99, static_cast<std::uint64_t>(alpha * 100)});
    constexpr int n = 40000;
    constexpr double dt = 0.7;
    constexpr double w = 1.5;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double e = std::exp(-w * voss::sample_stable_increment(alpha, dt, rng));
      sum += e;
      sum_sq += e * e;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / n);
    const double exact = std::exp(-dt * std::pow(w, alpha));
    CHECK(std::abs(mean - exact) <= 4.0 * se);
  }
}

TEST_CASE("laplace_voss examples") {
  const auto r = AlphaSchedule({0.0, 0.5, 1.0}, {0.6, 0.9});
  CHECK(voss::laplace_voss(r, 1.0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  // mpmath, 30 digits
  CHECK(voss::laplace_voss(r, 1.0, 2.0) ==
        doctest::Approx(0.18435513965930953203).epsilon(1e-14));
  CHECK(voss::laplace_voss(r, 1.0, 0.0) == 1.0);
  CHECK(voss::laplace_voss(r, 0.0, 2.0) == 1.0);
}

TEST_CASE("paths are nondecreasing, start at zero and are reproducible") {
  const auto s = AlphaSchedule({0.0, 0.4, 1.1, 2.0}, {0.35, 0.8, 0.55});
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(0.05 * i);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng a({seed, 0});
    Rng b({seed, 0});
    const auto p = voss::sample_voss_path(s, grid, a);
    const auto q = voss::sample_voss_path(s, grid, b);
    CHECK(p.values == q.values);
    CHECK(p.grid == grid);
    CHECK(p.values.front() == 0.0);
    for (std::size_t i = 1; i < p.values.size(); ++i) {
      CHECK(p.values[i] >= p.values[i - 1]);
    }
  }
  Rng rng({1, 1});
  const std::vector<double> origin{0.0};
  CHECK(voss::sample_voss_path(s, origin, rng).values == std::vector<double>{0.0});
}

TEST_CASE("different streams give different draws") {
  Rng a({42, 0});
  Rng b({42, 1});
  CHECK(voss::sample_stable_increment(0.5, 1.0, a) !=
        voss::sample_stable_increment(0.5, 1.0, b));
}

TEST_CASE("increments over each half of a path have the right law") {
  // alpha = 1/2 on both halves: every increment has Laplace exp(-0.5 sqrt(w))
  const auto s = AlphaSchedule::constant(0.5, 1.0);
  const std::vector<double> grid{0.0, 0.5, 1.0};
  constexpr int n = 40000;
  double first = 0.0;
  double second = 0.0;
  Rng rng({5, 5});
  for (int i = 0; i < n; ++i) {
    const auto p = voss::sample_voss_path(s, grid, rng);
    first += std::exp(-(p.values[1] - p.values[0]));
    second += std::exp(-(p.values[2] - p.values[1]));
  }
  // SE of a mean of values in (0, 1) is below 0.5 / sqrt(n) = 0.0025
  CHECK(std::abs(first / n - std::exp(-0.5)) <= 0.01);
  CHECK(std::abs(second / n - std::exp(-0.5)) <= 0.01);
}

TEST_CASE("sampler domain errors") {
  Rng rng({0, 0});
  const auto s = AlphaSchedule::constant(0.5, 1.0);
  CHECK_THROWS_AS((void)voss::sample_stable_increment(0.0, 1.0, rng), std::domain_error);
  CHECK_THROWS_AS((void)voss::sample_stable_increment(1.5, 1.0, rng), std::domain_error);
  CHECK_THROWS_AS((void)voss::sample_stable_increment(0.5, -1.0, rng), std::domain_error);
  CHECK_THROWS_AS((void)voss::sample_voss_at(s, 0.0, rng), std::domain_error);
  const std::vector<double> bad_start{0.5, 1.0};
  const std::vector<double> not_increasing{0.0, 1.0, 1.0};
  CHECK_THROWS_AS((void)voss::sample_voss_path(s, bad_start, rng), std::domain_error);
  CHECK_THROWS_AS((void)voss::sample_voss_path(s, not_increasing, rng), std::domain_error);
}
