#pragma once

#include <cstdint>
#include <optional>

#include "voss/rng.hpp"

namespace voss {

/// Means above this are not sampled; callers tally them as overflow.
inline constexpr double kPoissonMeanCap = 1e12;

/**
 * Poisson variate with mean mu.
 *
 * Sequential inversion for mu <= 30, Hormann's transformed rejection with
 * squeeze (PTRS) above. Returns nullopt when mu is not finite or exceeds
 * kPoissonMeanCap.
 */
[[nodiscard]] std::optional<std::uint64_t> sample_poisson(double mu, Rng& rng);

}  // namespace voss
