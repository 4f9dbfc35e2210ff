#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "voss/montecarlo.hpp"
#include "voss/poisson.hpp"
#include "voss/stable.hpp"

using voss::AlphaSchedule;
using voss::Rate;
using voss::RngSpec;

namespace {

AlphaSchedule reference() { return AlphaSchedule({0.0, 0.5, 1.0}, {0.6, 0.9}); }

voss::PmfTable poisson_table(double mean, int m_max) {
  voss::PmfTable t;
  for (int m = 0; m <= m_max; ++m) {
    t.probs.push_back(std::exp(-mean + m * std::log(mean) - std::lgamma(m + 1.0)));
  }
  t.trunc_bound = 1.0 - t.total();
  return t;
}

voss::PmfTable frequencies(const std::vector<std::uint64_t>& counts, int m_max) {
  voss::SimulationBatch batch;
  batch.counts = counts;
  return voss::empirical_pmf(batch, m_max);
}

}  // namespace

TEST_CASE("Poisson sampler moments") {
  for (double mu : {0.0, 0.3, 4.0, 29.0, 31.0, 250.0, 1e6}) {
    voss::Rng rng({3, static_cast<std::uint64_t>(mu)});
    constexpr int n = 50000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = static_cast<double>(*voss::sample_poisson(mu, rng));
      sum += x;
      sum_sq += x * x;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    if (mu == 0.0) {
      CHECK(sum == 0.0);
      continue;
    }
    CHECK(std::abs(mean - mu) <= 5.0 * std::sqrt(mu / n));
    CHECK(var == doctest::Approx(mu).epsilon(0.05));
  }
}

TEST_CASE("Poisson sampler overflow") {
  voss::Rng rng({0, 0});
  CHECK_FALSE(voss::sample_poisson(2e12, rng).has_value());
  CHECK_FALSE(voss::sample_poisson(INFINITY, rng).has_value());
  CHECK_FALSE(voss::sample_poisson(NAN, rng).has_value());
  CHECK(voss::sample_poisson(1e11, rng).has_value());
}

TEST_CASE("alpha = 1 simulation is Poisson(lambda t)") {
  const auto unit = AlphaSchedule::constant(1.0, 2.0);
  const auto batch = voss::simulate_gsfpp(unit, Rate(1.5), 2.0, 50000, {7, 0}, 1);
  CHECK(batch.n_overflow == 0);
  const double mean =
      std::accumulate(batch.counts.begin(), batch.counts.end(), 0.0) / 50000;
  CHECK(std::abs(mean - 3.0) <= 5.0 * std::sqrt(3.0 / 50000));
  const auto test = voss::chi_square_compare(voss::empirical_pmf(batch, 15),
                                             poisson_table(3.0, 15), 50000);
  CHECK(test.p_value >= 0.001);
}

TEST_CASE("zero-count frequency matches exp(-lambda^alpha t) analogue") {
  const auto batch = voss::simulate_gsfpp(reference(), Rate(1.0), 1.0, 100000,
                                          {11, 0}, 1);
  const auto pmf = voss::empirical_pmf(batch, 10);
  const double p0 = std::exp(-1.0);
  CHECK(std::abs(pmf.probs[0] - p0) <= 4.0 * std::sqrt(p0 * (1 - p0) / 1e5));
  CHECK(pmf.total() + pmf.trunc_bound == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("batches are deterministic and independent of worker count") {
  const auto one = voss::simulate_gsfpp(reference(), Rate(1.0), 1.0, 10000, {5, 2}, 1);
  const auto again = voss::simulate_gsfpp(reference(), Rate(1.0), 1.0, 10000, {5, 2}, 1);
  const auto three = voss::simulate_gsfpp(reference(), Rate(1.0), 1.0, 10000, {5, 2}, 3);
  CHECK(one.counts == again.counts);
  CHECK(one.counts == three.counts);
  CHECK(one.n_overflow == three.n_overflow);
  CHECK(one.schedule_digest == three.schedule_digest);
  const auto other = voss::simulate_gsfpp(reference(), Rate(1.0), 1.0, 10000, {6, 2}, 1);
  CHECK(one.counts != other.counts);

  const auto s1 = voss::simulate_segment_sum(reference(), Rate(1.0), 1.0, 9000, {1, 1}, 1);
  const auto s4 = voss::simulate_segment_sum(reference(), Rate(1.0), 1.0, 9000, {1, 1}, 4);
  CHECK(s1.counts == s4.counts);

  const auto l1 = voss::laplace_mc(reference(), 1.0, 1.0, 9000, {2, 2}, 1);
  const auto l2 = voss::laplace_mc(reference(), 1.0, 1.0, 9000, {2, 2}, 2);
  CHECK(l1.estimate == l2.estimate);
  CHECK(l1.standard_error == l2.standard_error);
}

TEST_CASE("schedule digest identifies the inputs") {
  const auto d = voss::schedule_digest(reference(), Rate(1.0), 1.0);
  CHECK(d == voss::schedule_digest(reference(), Rate(1.0), 1.0));
  CHECK(d != voss::schedule_digest(reference(), Rate(2.0), 1.0));
  CHECK(d != voss::schedule_digest(reference(), Rate(1.0), 0.5));
}

TEST_CASE("empirical pmf edge cases") {
  const auto zeros = frequencies(std::vector<std::uint64_t>(100, 0), 3);
  CHECK(zeros.probs == std::vector<double>{1.0, 0.0, 0.0, 0.0});
  CHECK(zeros.trunc_bound == 0.0);
  voss::SimulationBatch batch;
  batch.counts = {0, 1, 9};
  batch.n_overflow = 1;
  const auto pmf = voss::empirical_pmf(batch, 2);
  CHECK(pmf.probs == std::vector<double>{0.25, 0.25, 0.0});
  CHECK(pmf.trunc_bound == 0.5);
  CHECK(batch.overflow_fraction() == 0.25);
  CHECK(batch.heavy_tail_warning());
}

TEST_CASE("chi-square comparison") {
  const auto table = poisson_table(1.0, 12);
  SUBCASE("identical tables") {
    auto exact = table;
    exact.trunc_bound = 1.0 - exact.total();
    const auto test = voss::chi_square_compare(exact, table, 100000);
    CHECK(test.statistic == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    CHECK(test.p_value == doctest::Approx(1.0));
  }
  SUBCASE("power against a shifted mean") {
    voss::Rng rng({9, 0});
    std::vector<std::uint64_t> counts(20000);
    for (auto& c : counts) c = *voss::sample_poisson(2.0, rng);
    const auto test = voss::chi_square_compare(frequencies(counts, 12), table, 20000);
    CHECK(test.p_value < 1e-6);
  }
  SUBCASE("calibration under the null") {
    int rejections = 0;
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
      voss::Rng rng({rep, 77});
      std::vector<std::uint64_t> counts(5000);
      for (auto& c : counts) c = *voss::sample_poisson(1.0, rng);
      const auto test = voss::chi_square_compare(frequencies(counts, 12), table, 5000);
      rejections += test.p_value < 0.01 ? 1 : 0;
    }
    // Binomial(100, 0.01): P(X > 6) < 1e-4
    CHECK(rejections <= 6);
  }
}

TEST_CASE("two-sample chi-square") {
  const auto a = voss::simulate_gsfpp(reference(), Rate(1.0), 1.0, 20000, {1, 2}, 1);
  const auto b = voss::simulate_segment_sum(reference(), Rate(1.0), 1.0, 20000, {1, 3}, 1);
  CHECK(voss::chi_square_two_sample(a, b, 32).p_value >= 0.001);
  const auto self = voss::chi_square_two_sample(a, a, 32);
  CHECK(self.statistic == doctest::Approx(0.0).scale(1.0));
  const auto faster =
      voss::simulate_gsfpp(reference(), Rate(2.0), 1.0, 20000, {1, 4}, 1);
  CHECK(voss::chi_square_two_sample(a, faster, 32).p_value < 1e-6);
}

TEST_CASE("Laplace Monte Carlo") {
  const auto zero = voss::laplace_mc(reference(), 1.0, 0.0, 2000, {1, 0}, 1);
  CHECK(zero.estimate == 1.0);
  CHECK(zero.standard_error == 0.0);
  const auto unit = AlphaSchedule::constant(1.0, 1.0);
  const auto exact = voss::laplace_mc(unit, 1.0, 2.0, 2000, {1, 0}, 1);
  CHECK(exact.estimate == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(exact.standard_error <= 1e-12);
  const auto mc = voss::laplace_mc(reference(), 1.0, 2.0, 50000, {8, 0}, 1);
  CHECK(std::abs(mc.estimate - voss::laplace_voss(reference(), 1.0, 2.0)) <=
        4.0 * mc.standard_error);
}

TEST_CASE("hitting Monte Carlo") {
  const std::vector<double> grid{0.2, 0.4, 0.6, 0.8, 1.0};
  const auto est = voss::hitting_mc(reference(), Rate(1.0), grid, 2, 20000, {4, 0}, 1);
  REQUIRE(est.size() == grid.size());
  for (std::size_t i = 1; i < est.size(); ++i) {
    CHECK(est[i].estimate >= est[i - 1].estimate);
  }
  const auto higher = voss::hitting_mc(reference(), Rate(1.0), grid, 3, 20000, {4, 0}, 1);
  for (std::size_t i = 0; i < est.size(); ++i) {
    CHECK(higher[i].estimate <= est[i].estimate);
  }
  const auto unit = AlphaSchedule::constant(1.0, 1.0);
  const std::vector<double> one{1.0};
  const auto poisson = voss::hitting_mc(unit, Rate(1.0), one, 1, 50000, {4, 1}, 1);
  const double p = 1.0 - std::exp(-1.0);
  CHECK(std::abs(poisson.back().estimate - p) <= 4.0 * std::sqrt(p * (1 - p) / 5e4));
}
