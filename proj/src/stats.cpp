#include "voss/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace voss::stats {

namespace {

double ks_p_value(double d, double effective_n) {
  const double root = std::sqrt(effective_n);
  return kolmogorov_sf((root + 0.12 + 0.11 / root) * d);
}

}  // namespace

double chi_square_sf(double x, int dof) {
  if (dof < 1) throw std::domain_error("chi-square needs dof >= 1");
  if (!(x > 0.0)) return 1.0;
  const boost::math::chi_squared_distribution<double> dist(dof);
  return boost::math::cdf(boost::math::complement(dist, x));
}

double kolmogorov_sf(double x) {
  if (!(x > 0.0)) return 1.0;
  constexpr double pi = std::numbers::pi;
  if (x < 1.18) {
    // Jacobi theta form of the CDF converges fast for small x
    const double w = pi * pi / (8.0 * x * x);
    double cdf = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double odd = 2.0 * k - 1.0;
      cdf += std::exp(-odd * odd * w);
    }
    return 1.0 - std::sqrt(2.0 * pi) / x * cdf;
  }
  double sf = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sf += (k % 2 == 1) ? term : -term;
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * sf, 0.0, 1.0);
}

TestResult ks_one_sample(std::vector<double> samples,
                         const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::domain_error("KS test on empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, f - static_cast<double>(i) / n,
                  static_cast<double>(i + 1) / n - f});
  }
  return {d, ks_p_value(d, n), 0};
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::domain_error("KS test on empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return {d, ks_p_value(d, na * nb / (na + nb)), 0};
}

std::vector<std::size_t> pool_bins(std::span<const double> weight,
                                   double min_weight) {
  std::vector<std::size_t> starts;
  std::size_t open_start = 0;
  double acc = 0.0;
  for (std::size_t i = 0; i < weight.size(); ++i) {
    acc += weight[i];
    if (acc >= min_weight) {
      starts.push_back(open_start);
      open_start = i + 1;
      acc = 0.0;
    }
  }
  // leftover bins after the last full group fold into that group
  return starts;
}

}  // namespace voss::stats
