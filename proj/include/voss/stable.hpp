#pragma once

#include <span>
#include <vector>

#include "voss/rng.hpp"
#include "voss/schedule.hpp"

namespace voss {

/// A subordinator trajectory observed on a time grid.
struct SamplePath {
  std::vector<double> grid;
  std::vector<double> values;
};

/**
 * One-sided alpha-stable increment over a window of length dt, i.e. a
 * positive variate with Laplace transform exp(-dt * w^alpha).
 *
 * Uses Kanter's exact representation through Zolotarev's function:
 *   S = sin(a pi U) sin((1-a) pi U)^((1-a)/a) / sin(pi U)^(1/a) * E^(-(1-a)/a)
 * with U uniform on (0,1) and E standard exponential, then dt^(1/a) scaling.
 * alpha = 1 returns dt exactly. Very small alpha can overflow to +inf.
 */
[[nodiscard]] double sample_stable_increment(double alpha, double dt, Rng& rng);

/// S(t) for the variable-order subordinator: independent stable increments
/// over every segment of [0, t).
[[nodiscard]] double sample_voss_at(const AlphaSchedule& schedule, double t,
                                    Rng& rng);

/// Coupled trajectory on a strictly increasing grid starting at 0.
[[nodiscard]] SamplePath sample_voss_path(const AlphaSchedule& schedule,
                                          std::span<const double> grid,
                                          Rng& rng);

/// E[exp(-w S(t))] in closed form.
[[nodiscard]] double laplace_voss(const AlphaSchedule& schedule, double t,
                                  double w);

}  // namespace voss
