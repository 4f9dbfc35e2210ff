#include "voss/poisson.hpp"

#include <cmath>
#include <stdexcept>

namespace voss {

namespace {

std::uint64_t poisson_inversion(double mu, Rng& rng) {
  const double u = rng.uniform_open();
  double p = std::exp(-mu);
  double cdf = p;
  std::uint64_t k = 0;
  // the cap only matters if rounding leaves cdf just below u
  while (u > cdf && k < 1000) {
    ++k;
    p *= mu / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

// W. Hormann, "The transformed rejection method for generating Poisson
// random variables", Insurance: Mathematics and Economics 12 (1993).
std::uint64_t poisson_ptrs(double mu, Rng& rng) {
  const double log_mu = std::log(mu);
  const double smu = std::sqrt(mu);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);

  while (true) {
    const double u = rng.uniform_open() - 0.5;
    const double v = rng.uniform_open();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mu + 0.43);
    if (us >= 0.07 && v <= vr) {
      return static_cast<std::uint64_t>(k);
    }
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mu + k * log_mu - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

}  // namespace

std::optional<std::uint64_t> sample_poisson(double mu, Rng& rng) {
  if (!(mu >= 0.0)) {
    if (std::isnan(mu)) return std::nullopt;
    throw std::domain_error("Poisson mean must be >= 0");
  }
  if (!std::isfinite(mu) || mu > kPoissonMeanCap) return std::nullopt;
  if (mu == 0.0) return 0;
  if (mu <= 30.0) return poisson_inversion(mu, rng);
  return poisson_ptrs(mu, rng);
}

}  // namespace voss
