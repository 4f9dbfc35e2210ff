#include "voss/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "voss/montecarlo.hpp"
#include "voss/stable.hpp"
#include "voss/stats.hpp"

namespace voss {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

Check make_check(std::string name, double statistic, double lower,
                 double upper, std::string details, std::uint64_t n = 0) {
  Check c;
  c.name = std::move(name);
  c.statistic = statistic;
  c.lower = lower;
  c.upper = upper;
  c.pass = statistic >= lower && statistic <= upper;
  c.details = std::move(details);
  c.n = n;
  return c;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

Check at_most(std::string name, double statistic, double threshold,
              std::string details, std::uint64_t n = 0) {
  // NaN statistics must fail
  if (std::isnan(statistic)) statistic = kInf;
  return make_check(std::move(name), statistic, -kInf, threshold,
                    std::move(details), n);
}

Check at_least(std::string name, double statistic, double threshold,
               std::string details, std::uint64_t n = 0) {
  if (std::isnan(statistic)) statistic = -kInf;
  return make_check(std::move(name), statistic, threshold, kInf,
                    std::move(details), n);
}

std::string overflow_note(const SimulationBatch& batch) {
  std::ostringstream out;
  out << "n_overflow=" << batch.n_overflow;
  if (batch.n_overflow > 0) {
    out << " (counted in the tail bin)";
  }
  if (batch.heavy_tail_warning()) out << " WARNING overflow fraction > 1%";
  return out.str();
}

double poisson_pmf(double mean, int m) {
  return std::exp(-mean + m * std::log(mean) - std::lgamma(m + 1.0));
}

void validate(const VerificationConfig& config) {
  std::vector<std::string> problems;
  if (config.n < VerificationConfig::kMinSamples) {
    problems.push_back("sample size n=" + std::to_string(config.n) +
                       " is below the minimum of " +
                       std::to_string(VerificationConfig::kMinSamples) +
                       " for statistical checks");
  }
  if (config.segments.empty()) problems.emplace_back("no segments given");
  for (const auto& [duration, alpha] : config.segments) {
    if (!(duration > 0.0)) problems.emplace_back("non-positive duration");
    if (!(alpha > 0.0 && alpha <= 1.0)) {
      problems.emplace_back("order outside (0, 1]");
    }
  }
  if (!(config.lambda > 0.0)) problems.emplace_back("lambda must be > 0");
  if (!(config.t > 0.0)) problems.emplace_back("t must be > 0");
  if (config.series.r_max < 1) problems.emplace_back("r_max must be >= 1");
  if (!(config.series.tol > 0.0)) problems.emplace_back("tol must be > 0");
  if (config.series.m_max < 10) {
    problems.emplace_back("m_max must be >= 10 for the oracle check");
  }
  if (config.levy_terms < 1) problems.emplace_back("levy_terms must be >= 1");
  if (!problems.empty()) throw ValidationError(std::move(problems));
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::runtime_error("invalid configuration: " + join(problems)),
      problems_(std::move(problems)) {}

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.pass; });
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json out;
  out["seed"] = seed_provenance.seed;
  out["stream_id"] = seed_provenance.stream_id;
  out["all_passed"] = all_passed();
  out["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json j;
    j["name"] = c.name;
    j["statistic"] = c.statistic;
    if (std::isinf(c.lower)) {
      j["comparison"] = "<=";
      j["threshold"] = c.upper;
    } else if (std::isinf(c.upper)) {
      j["comparison"] = ">=";
      j["threshold"] = c.lower;
    } else {
      j["comparison"] = "within";
      j["threshold"] = {c.lower, c.upper};
    }
    j["pass"] = c.pass;
    j["seed"] = seed_provenance.seed;
    j["n"] = c.n;
    j["details"] = c.details;
    out["checks"].push_back(std::move(j));
  }
  return out;
}

VerificationReport run_verification(const VerificationConfig& config,
                                    const VerificationHooks& hooks) {
  validate(config);
  const auto schedule = AlphaSchedule::from_segments(config.segments);
  const Rate lambda(config.lambda);
  const double t = config.t;
  const auto& series = config.series;
  const std::size_t n = config.n;
  const unsigned workers = config.workers;
  auto stream = [&](std::uint64_t id) { return RngSpec{config.seed, id}; };

  VerificationReport report;
  report.seed_provenance = RngSpec{config.seed, 0};
  auto& checks = report.checks;

  auto analytic = pmf_convolution(schedule, lambda, t, series);
  if (hooks.perturb_analytic_pmf) hooks.perturb_analytic_pmf(analytic);

  // pmf series against the convolution oracle
  {
    double worst = 0.0;
    for (int m = 0; m <= 10; ++m) {
      const auto s = pmf_series(schedule, lambda, t, m, series);
      worst = std::max(worst, std::abs(s.value - analytic.probs[m]));
    }
    checks.push_back(at_most("oracle_equivalence", worst, 1e-6,
                             "max |pmf_series - pmf_convolution|, m = 0..10"));
  }

  // normalization on the reference case and three more schedules
  {
    const std::vector<std::vector<std::pair<double, double>>> extra{
        {{1.0, 0.5}},
        {{0.3, 0.4}, {0.3, 0.7}, {0.4, 0.95}},
        {{0.25, 0.8}, {0.75, 0.3}},
    };
    double worst = -kInf;
    std::ostringstream details;
    auto assess = [&](const PmfTable& table, const std::string& label) {
      const double total = table.total();
      const double violation =
          std::max(1.0 - table.trunc_bound - total, total - 1.0 - 1e-10);
      worst = std::max(worst, violation);
      details << label << ": sum=" << total
              << " trunc_bound=" << table.trunc_bound << "; ";
    };
    assess(analytic, "reference");
    for (std::size_t i = 0; i < extra.size(); ++i) {
      const auto s = AlphaSchedule::from_segments(extra[i]);
      assess(pmf_convolution(s, lambda, s.horizon(), series),
             "schedule" + std::to_string(i + 1));
    }
    checks.push_back(at_most("normalization", worst, 0.0,
                             "max violation of sum in [1 - trunc_bound, "
                             "1 + 1e-10]; " + details.str()));
  }

  // Laplace transform by Monte Carlo
  {
    const double exact = laplace_voss(schedule, t, 1.0);
    const auto mc = laplace_mc(schedule, t, 1.0, n, stream(1), workers);
    std::ostringstream details;
    details << "estimate=" << mc.estimate << " exact=" << exact
            << " se=" << mc.standard_error;
    const double z = std::abs(mc.estimate - exact) / mc.standard_error;
    checks.push_back(at_most("laplace_transform_z", z, 3.0, details.str(), n));
    checks.push_back(at_most("laplace_transform_se", mc.standard_error, 2e-3,
                             details.str(), n));
  }

  // whole-path simulation against the per-segment sum
  {
    const auto whole = simulate_gsfpp(schedule, lambda, t, n, stream(2), workers);
    const auto split =
        simulate_segment_sum(schedule, lambda, t, n, stream(3), workers);
    const auto test = chi_square_two_sample(whole, split, series.m_max);
    std::ostringstream details;
    details << "chi2=" << test.statistic << " dof=" << test.dof << "; gsfpp "
            << overflow_note(whole) << "; segment_sum " << overflow_note(split);
    checks.push_back(at_least("distributional_identity", test.p_value, 0.01,
                              details.str(), n));
  }

  // simulation against analytic pmf
  {
    const auto batch = simulate_gsfpp(schedule, lambda, t, n, stream(4), workers);
    const auto test =
        chi_square_compare(empirical_pmf(batch, series.m_max), analytic, n);
    std::ostringstream details;
    details << "chi2=" << test.statistic << " dof=" << test.dof << "; "
            << overflow_note(batch);
    checks.push_back(at_least("simulation_vs_analytics", test.p_value, 0.01,
                              details.str(), n));
  }

  // second-order convergence of the pgf equation residual
  for (double tp : {0.25, 0.75}) {
    const double coarse = pde_residual_pgf(schedule, lambda, tp, 0.5, 1e-3);
    const double fine = pde_residual_pgf(schedule, lambda, tp, 0.5, 1e-4);
    std::ostringstream name;
    name << "pde_convergence_t" << tp;
    std::ostringstream details;
    details << "residual(h=1e-3)=" << coarse << " residual(h=1e-4)=" << fine;
    checks.push_back(make_check(name.str(), coarse / fine, 50.0, 200.0,
                                details.str()));
  }

  // pmf governing equation
  {
    double worst = 0.0;
    for (double tp : {0.25, 0.75}) {
      for (int m = 0; m <= 2; ++m) {
        worst = std::max(
            worst, ode_residual_pmf(schedule, lambda, tp, m, series, 1e-3));
      }
    }
    checks.push_back(at_most("ode_residual", worst, 1e-4,
                             "max over m = 0..2, t in {0.25, 0.75}, h = 1e-3"));
  }

  // alpha = 1 collapses everything onto Poisson(lambda t) with lambda=1, t=2
  {
    const auto unit = AlphaSchedule::constant(1.0, 2.0);
    const Rate one(1.0);
    const double mean = 2.0;
    double worst = 0.0;
    const auto table = pmf_convolution(unit, one, 2.0, series);
    for (int m = 0; m <= series.m_max; ++m) {
      const double exact = poisson_pmf(mean, m);
      worst = std::max(worst, std::abs(table.probs[m] - exact));
      worst = std::max(
          worst, std::abs(pmf_series(unit, one, 2.0, m, series).value - exact));
    }
    for (double u : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      worst = std::max(worst, std::abs(pgf(unit, one, 2.0, u) -
                                       std::exp(-mean * (1.0 - u))));
    }
    for (double theta : {0.0, 0.5, 1.0, 2.0, std::numbers::pi}) {
      const std::complex<double> exact =
          std::exp(mean * (std::polar(1.0, theta) - 1.0));
      worst = std::max(worst, std::abs(pcf(unit, one, 2.0, theta) - exact));
    }
    for (int k = 1; k <= 5; ++k) {
      double below = 0.0;
      for (int m = 0; m < k; ++m) below += poisson_pmf(mean, m);
      worst = std::max(worst, std::abs(hitting_cdf(unit, one, 2.0, k, series).value -
                                       (1.0 - below)));
    }
    const auto levy = levy_segment(1.0, one, 10);
    for (std::size_t j = 0; j < levy.masses.size(); ++j) {
      worst = std::max(worst, std::abs(levy.masses[j] - (j == 0 ? 1.0 : 0.0)));
    }
    checks.push_back(at_most("poisson_collapse", worst, 1e-8,
                             "pmf, pgf, pcf, hitting and levy vs Poisson(2)"));
  }

  // stable sampler: Levy(1/2) law and self-similarity
  {
    Rng rng({config.seed, 5});
    std::vector<double> xs(n);
    for (auto& x : xs) x = sample_stable_increment(0.5, 1.0, rng);
    const auto ks = stats::ks_one_sample(std::move(xs), [](double x) {
      return x <= 0.0 ? 0.0 : std::erfc(0.5 / std::sqrt(x));
    });
    std::ostringstream details;
    details << "D=" << ks.statistic << " vs CDF erfc(1/(2 sqrt x))";
    checks.push_back(
        at_least("stable_ks_half", ks.p_value, 0.01, details.str(), n));

    constexpr double alpha = 0.7;
    constexpr double dt = 0.3;
    Rng direct_rng({config.seed, 6});
    Rng scaled_rng({config.seed, 7});
    std::vector<double> direct(n);
    std::vector<double> scaled(n);
    const double scale = std::pow(dt, 1.0 / alpha);
    for (auto& x : direct) x = sample_stable_increment(alpha, dt, direct_rng);
    for (auto& x : scaled) {
      x = scale * sample_stable_increment(alpha, 1.0, scaled_rng);
    }
    const auto two = stats::ks_two_sample(std::move(direct), std::move(scaled));
    std::ostringstream details2;
    details2 << "D=" << two.statistic << " alpha=0.7 dt=0.3";
    checks.push_back(at_least("stable_self_similarity", two.p_value, 0.01,
                              details2.str(), n));
  }

  // Levy measure reconstruction of the segment pgf, truncated at J terms
  {
    double worst = 0.0;
    std::ostringstream details;
    for (double alpha : {0.4, 0.6, 0.9}) {
      const auto measure = levy_segment(alpha, Rate(1.0), config.levy_terms);
      const double err =
          std::abs(levy_reconstructed_pgf(measure, 1.0, 0.5) -
                   segment_pgf(alpha, Rate(1.0), 1.0, 0.5));
      worst = std::max(worst, err);
      details << "alpha=" << alpha << " error=" << err
              << " omitted_mass=" << measure.omitted_mass() << "; ";
    }
    details << "J=" << config.levy_terms << ", u=0.5";
    checks.push_back(
        at_most("levy_reconstruction", worst, 1e-4, details.str()));
  }

  // hitting-time CDF against coupled-path Monte Carlo
  {
    std::vector<double> grid;
    for (int i = 1; i <= 10; ++i) grid.push_back(t * i / 10.0);
    int covered = 0;
    int total = 0;
    std::uint64_t overflow = 0;
    for (int k = 1; k <= 3; ++k) {
      const auto mc = hitting_mc(schedule, lambda, grid, k, n,
                                 stream(7 + static_cast<std::uint64_t>(k)),
                                 workers);
      for (const auto& point : mc) {
        const double exact =
            hitting_cdf(schedule, lambda, point.t, k, series).value;
        ++total;
        if (std::abs(exact - point.estimate) <= 3.0 * point.standard_error) {
          ++covered;
        }
        overflow += point.n_overflow;
      }
    }
    std::ostringstream details;
    details << covered << " of " << total
            << " grid points within 3 SE; k = 1..3; overflowed draws counted "
               "as hits: "
            << overflow;
    checks.push_back(at_least("hitting_coverage",
                              static_cast<double>(covered) / total, 0.95,
                              details.str(), n));
  }

  return report;
}

}  // namespace voss
