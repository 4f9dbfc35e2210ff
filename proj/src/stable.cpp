#include "voss/stable.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace voss {

namespace {

double sum_increments(const std::vector<Segment>& segments, Rng& rng) {
  double total = 0.0;
  for (const auto& seg : segments) {
    total += sample_stable_increment(seg.alpha, seg.length, rng);
  }
  return total;
}

}  // namespace

double sample_stable_increment(double alpha, double dt, Rng& rng) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::domain_error("stable order outside (0, 1]");
  }
  if (!(dt > 0.0)) {
    throw std::domain_error("stable increment needs dt > 0");
  }
  if (alpha == 1.0) return dt;

  constexpr double pi = std::numbers::pi;
  const double u = rng.uniform_open();
  const double e = rng.exponential();
  const double ratio = (1.0 - alpha) / alpha;
  // sin(pi u) is symmetric about 1/2; fold to keep the argument small
  const double sin_pu = std::sin(pi * std::min(u, 1.0 - u));
  const double log_s = std::log(std::sin(alpha * pi * u)) +
                       ratio * (std::log(std::sin((1.0 - alpha) * pi * u)) -
                                std::log(e)) -
                       std::log(sin_pu) / alpha + std::log(dt) / alpha;
  return std::exp(log_s);
}

double sample_voss_at(const AlphaSchedule& schedule, double t, Rng& rng) {
  if (!(t > 0.0)) {
    throw std::domain_error("sample_voss_at needs t > 0");
  }
  return sum_increments(schedule.clipped(t), rng);
}

SamplePath sample_voss_path(const AlphaSchedule& schedule,
                            std::span<const double> grid, Rng& rng) {
  if (grid.empty() || grid.front() != 0.0) {
    throw std::domain_error("path grid must start at 0");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw std::domain_error("path grid must be strictly increasing");
    }
  }
  SamplePath path;
  path.grid.assign(grid.begin(), grid.end());
  path.values.reserve(grid.size());
  path.values.push_back(0.0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const auto window = restrict(schedule, grid[i - 1], grid[i]);
    const double inc = sum_increments(window.clipped(window.horizon()), rng);
    path.values.push_back(path.values.back() + inc);
  }
  return path;
}

double laplace_voss(const AlphaSchedule& schedule, double t, double w) {
  return std::exp(-exponent_integral(schedule, t, w));
}

}  // namespace voss
