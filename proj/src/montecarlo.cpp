#include "voss/montecarlo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "voss/poisson.hpp"
#include "voss/stable.hpp"

namespace voss {

namespace {

Rng block_rng(RngSpec spec, std::size_t block) {
  return Rng({spec.seed, (spec.stream_id << 32) ^ block});
}

// Runs fn(block, begin, end) for every block of kBlockSize samples, blocks
// dealt round-robin to the workers.
template <class Fn>
void run_blocks(std::size_t n, unsigned workers, Fn&& fn) {
  const std::size_t blocks = (n + kBlockSize - 1) / kBlockSize;
  workers = std::clamp<unsigned>(workers, 1U,
                                 static_cast<unsigned>(std::max<std::size_t>(blocks, 1)));
  auto work = [&](unsigned w) {
    for (std::size_t b = w; b < blocks; b += workers) {
      fn(b, b * kBlockSize, std::min(n, (b + 1) * kBlockSize));
    }
  };
  if (workers == 1) {
    work(0);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          work(w);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

void check_sample_request(double t, std::size_t n) {
  if (n < 1) throw std::domain_error("sample size must be >= 1");
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::domain_error("simulation time must be finite and >= 0");
  }
}

// Draw results per sample index; kOverflow marks an out-of-range draw.
constexpr std::uint64_t kOverflow = ~std::uint64_t{0};

template <class Draw>
SimulationBatch collect(const AlphaSchedule& schedule, Rate lambda, double t,
                        std::size_t n, RngSpec spec, unsigned workers,
                        Draw&& draw) {
  std::vector<std::uint64_t> raw(n, 0);
  run_blocks(n, workers, [&](std::size_t block, std::size_t begin,
                             std::size_t end) {
    Rng rng = block_rng(spec, block);
    for (std::size_t i = begin; i < end; ++i) raw[i] = draw(rng);
  });
  SimulationBatch batch;
  batch.schedule_digest = schedule_digest(schedule, lambda, t);
  batch.rng = spec;
  batch.counts.reserve(n);
  for (auto c : raw) {
    if (c == kOverflow) {
      ++batch.n_overflow;
    } else {
      batch.counts.push_back(c);
    }
  }
  return batch;
}

// Counts of 0..m_max, then one bin for larger counts and overflows.
std::vector<double> histogram(const SimulationBatch& batch, int m_max) {
  if (m_max < 0) throw std::domain_error("m_max must be >= 0");
  std::vector<double> bins(static_cast<std::size_t>(m_max) + 2, 0.0);
  bins.back() = static_cast<double>(batch.n_overflow);
  for (auto c : batch.counts) {
    const auto idx = std::min<std::uint64_t>(c, static_cast<std::uint64_t>(m_max) + 1);
    bins[static_cast<std::size_t>(idx)] += 1.0;
  }
  return bins;
}

std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

double SimulationBatch::overflow_fraction() const noexcept {
  const auto total = requested();
  return total == 0 ? 0.0
                    : static_cast<double>(n_overflow) /
                          static_cast<double>(total);
}

bool SimulationBatch::heavy_tail_warning() const noexcept {
  return overflow_fraction() > 0.01;
}

unsigned default_workers() {
  if (const char* env = std::getenv("VOSS_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return static_cast<unsigned>(w);
  }
  return 1;
}

std::string schedule_digest(const AlphaSchedule& schedule, Rate lambda,
                            double t) {
  std::ostringstream out;
  out << "segments=[";
  const auto& b = schedule.boundaries();
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (k) out << ',';
    out << '[' << format_double(b[k + 1] - b[k]) << ','
        << format_double(schedule.orders()[k]) << ']';
  }
  out << "];lambda=" << format_double(lambda.value())
      << ";t=" << format_double(t);
  return out.str();
}

SimulationBatch simulate_gsfpp(const AlphaSchedule& schedule, Rate lambda,
                               double t, std::size_t n, RngSpec rng,
                               unsigned workers) {
  check_sample_request(t, n);
  return collect(schedule, lambda, t, n, rng, workers,
                 [&](Rng& g) -> std::uint64_t {
                   if (t == 0.0) return 0;
                   const double s = sample_voss_at(schedule, t, g);
                   const auto c = sample_poisson(lambda.value() * s, g);
                   return c ? *c : kOverflow;
                 });
}

SimulationBatch simulate_segment_sum(const AlphaSchedule& schedule,
                                     Rate lambda, double t, std::size_t n,
                                     RngSpec rng, unsigned workers) {
  check_sample_request(t, n);
  const auto segments = schedule.clipped(t);
  return collect(schedule, lambda, t, n, rng, workers,
                 [&](Rng& g) -> std::uint64_t {
                   std::uint64_t total = 0;
                   bool overflow = false;
                   for (const auto& seg : segments) {
                     const double s =
                         sample_stable_increment(seg.alpha, seg.length, g);
                     const auto c = sample_poisson(lambda.value() * s, g);
                     if (c) {
                       total += *c;
                     } else {
                       overflow = true;
                     }
                   }
                   return overflow ? kOverflow : total;
                 });
}

PmfTable empirical_pmf(const SimulationBatch& batch, int m_max) {
  if (batch.requested() == 0) throw std::domain_error("empty batch");
  auto bins = histogram(batch, m_max);
  const double n = static_cast<double>(batch.requested());
  PmfTable table;
  table.trunc_bound = bins.back() / n;
  bins.pop_back();
  table.probs.reserve(bins.size());
  for (double h : bins) table.probs.push_back(h / n);
  return table;
}

stats::TestResult chi_square_compare(const PmfTable& empirical,
                                     const PmfTable& analytic, std::size_t n) {
  if (empirical.probs.size() != analytic.probs.size()) {
    throw std::domain_error("pmf tables cover different state ranges");
  }
  const double nn = static_cast<double>(n);
  std::vector<double> expected;
  std::vector<double> observed;
  for (std::size_t m = 0; m < analytic.probs.size(); ++m) {
    expected.push_back(nn * analytic.probs[m]);
    observed.push_back(nn * empirical.probs[m]);
  }
  expected.push_back(nn * std::max(0.0, 1.0 - analytic.total()));
  observed.push_back(nn * empirical.trunc_bound);

  const auto starts = stats::pool_bins(expected, 5.0);
  if (starts.size() < 2) {
    throw std::domain_error("fewer than 2 pooled bins; chi-square undefined");
  }
  double statistic = 0.0;
  for (std::size_t g = 0; g < starts.size(); ++g) {
    const std::size_t end = g + 1 < starts.size() ? starts[g + 1] : expected.size();
    double e = 0.0;
    double o = 0.0;
    for (std::size_t i = starts[g]; i < end; ++i) {
      e += expected[i];
      o += observed[i];
    }
    statistic += (o - e) * (o - e) / e;
  }
  const int dof = static_cast<int>(starts.size()) - 1;
  return {statistic, stats::chi_square_sf(statistic, dof), dof};
}

stats::TestResult chi_square_two_sample(const SimulationBatch& a,
                                        const SimulationBatch& b, int m_max) {
  const auto ca = histogram(a, m_max);
  const auto cb = histogram(b, m_max);
  const double na = static_cast<double>(a.requested());
  const double nb = static_cast<double>(b.requested());

  // pool on the smaller of the two expected counts
  const double share = std::min(na, nb) / (na + nb);
  std::vector<double> weight;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    weight.push_back((ca[i] + cb[i]) * share);
  }
  const auto starts = stats::pool_bins(weight, 5.0);
  if (starts.size() < 2) {
    throw std::domain_error("fewer than 2 pooled bins; chi-square undefined");
  }
  double statistic = 0.0;
  for (std::size_t g = 0; g < starts.size(); ++g) {
    const std::size_t end = g + 1 < starts.size() ? starts[g + 1] : ca.size();
    double oa = 0.0;
    double ob = 0.0;
    for (std::size_t i = starts[g]; i < end; ++i) {
      oa += ca[i];
      ob += cb[i];
    }
    const double pooled = (oa + ob) / (na + nb);
    const double xa = na * pooled;
    const double xb = nb * pooled;
    statistic += (oa - xa) * (oa - xa) / xa + (ob - xb) * (ob - xb) / xb;
  }
  const int dof = static_cast<int>(starts.size()) - 1;
  return {statistic, stats::chi_square_sf(statistic, dof), dof};
}

McEstimate laplace_mc(const AlphaSchedule& schedule, double t, double w,
                      std::size_t n, RngSpec rng, unsigned workers) {
  check_sample_request(t, n);
  if (!(w >= 0.0)) throw std::domain_error("Laplace argument must be >= 0");
  std::vector<double> values(n, 1.0);
  if (t > 0.0 && w > 0.0) {
    run_blocks(n, workers, [&](std::size_t block, std::size_t begin,
                               std::size_t end) {
      Rng g = block_rng(rng, block);
      for (std::size_t i = begin; i < end; ++i) {
        values[i] = std::exp(-w * sample_voss_at(schedule, t, g));
      }
    });
  }
  // Welford, sequential in index order for reproducibility
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double delta = values[i] - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (values[i] - mean);
  }
  const double var = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

std::vector<HittingEstimate> hitting_mc(const AlphaSchedule& schedule,
                                        Rate lambda,
                                        std::span<const double> t_grid, int k,
                                        std::size_t n, RngSpec rng,
                                        unsigned workers) {
  if (k < 1) throw std::domain_error("hitting level k must be >= 1");
  if (n < 1) throw std::domain_error("sample size must be >= 1");
  if (t_grid.empty()) return {};
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw std::domain_error("hitting grid must be increasing and >= 0");
    }
  }
  std::vector<double> path_grid;
  const bool prepend = t_grid.front() != 0.0;
  if (prepend) path_grid.push_back(0.0);
  path_grid.insert(path_grid.end(), t_grid.begin(), t_grid.end());
  const std::size_t offset = prepend ? 1 : 0;
  const std::size_t points = t_grid.size();

  const std::size_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<std::uint64_t> hits(blocks * points, 0);
  std::vector<std::uint64_t> overflow(blocks * points, 0);
  const auto level = static_cast<std::uint64_t>(k);

  run_blocks(n, workers, [&](std::size_t block, std::size_t begin,
                             std::size_t end) {
    Rng g = block_rng(rng, block);
    for (std::size_t i = begin; i < end; ++i) {
      const auto path = sample_voss_path(schedule, path_grid, g);
      std::uint64_t count = 0;
      bool overflowed = false;
      for (std::size_t j = 1; j < path.values.size(); ++j) {
        if (!overflowed) {
          const double mu =
              lambda.value() * (path.values[j] - path.values[j - 1]);
          const auto c = sample_poisson(mu, g);
          if (c) {
            count += *c;
          } else {
            overflowed = true;
          }
        }
        const std::size_t slot = block * points + (j - offset);
        if (overflowed) {
          ++overflow[slot];
          ++hits[slot];
        } else if (count >= level) {
          ++hits[slot];
        }
      }
    }
  });

  std::vector<HittingEstimate> out;
  out.reserve(points);
  const double nn = static_cast<double>(n);
  for (std::size_t p = 0; p < points; ++p) {
    std::uint64_t h = 0;
    std::uint64_t o = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
      h += hits[b * points + p];
      o += overflow[b * points + p];
    }
    const double est = static_cast<double>(h) / nn;
    out.push_back({t_grid[p], est, std::sqrt(est * (1.0 - est) / nn), o});
  }
  return out;
}

}  // namespace voss
