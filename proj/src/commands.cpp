#include "voss/commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "voss/montecarlo.hpp"

namespace voss {

namespace {

std::string describe(double x) {
  std::ostringstream out;
  out.precision(10);
  out << x;
  return out.str();
}

std::int64_t as_int(std::size_t x) { return static_cast<std::int64_t>(x); }

}  // namespace

CommandOutput cmd_pmf(const RunConfig& config) {
  config.validate(false);
  const auto schedule = config.schedule();
  const Rate lambda(config.lambda);
  CommandOutput out;
  out.table.columns = {"m",           "pmf_series", "pmf_convolution",
                       "abs_diff",    "trunc_bound", "status"};
  if (config.t == 0.0) {
    out.table.rows.push_back({std::int64_t{0}, 1.0, 1.0, 0.0, 0.0, "ok"});
    out.summary.push_back("t = 0: the process starts in state 0");
    return out;
  }
  const auto table = pmf_convolution(schedule, lambda, config.t, config.series);
  bool flagged = false;
  for (int m = 0; m <= config.series.m_max; ++m) {
    const auto s = pmf_series(schedule, lambda, config.t, m, config.series);
    const double conv = table.probs[static_cast<std::size_t>(m)];
    std::string status = "ok";
    if (!s.converged || !table.converged) {
      status = "not_converged";
    } else if (s.low_confidence || table.low_confidence) {
      status = "low_confidence";
    }
    flagged = flagged || status != "ok";
    out.table.rows.push_back({std::int64_t{m}, s.value, conv,
                              std::abs(s.value - conv), s.trunc_bound, status});
  }
  out.summary.push_back("sum of convolution table = " + describe(table.total()) +
                        ", mass beyond m_max <= " + describe(table.trunc_bound));
  if (flagged) {
    out.summary.push_back(
        "some rows are outside the series validity region or did not "
        "converge within r_max");
    out.exit_status = kExitLowConfidence;
  }
  return out;
}

CommandOutput cmd_pgf(const RunConfig& config) {
  config.validate(false);
  const auto schedule = config.schedule();
  const Rate lambda(config.lambda);
  CommandOutput out;
  out.table.columns = {"u", "pgf"};
  for (double u : config.u_values()) {
    out.table.rows.push_back({u, pgf(schedule, lambda, config.t, u)});
  }
  return out;
}

CommandOutput cmd_pcf(const RunConfig& config) {
  config.validate(false);
  const auto schedule = config.schedule();
  const Rate lambda(config.lambda);
  CommandOutput out;
  out.table.columns = {"theta", "re", "im", "abs"};
  for (double theta : config.theta_values()) {
    const auto phi = pcf(schedule, lambda, config.t, theta);
    out.table.rows.push_back({theta, phi.real(), phi.imag(), std::abs(phi)});
  }
  return out;
}

CommandOutput cmd_simulate(const RunConfig& config) {
  config.validate(true);
  const auto schedule = config.schedule();
  const Rate lambda(config.lambda);
  const RngSpec rng{config.seed, 0};
  const auto batch =
      simulate_gsfpp(schedule, lambda, config.t, config.n, rng, config.workers);
  const auto empirical = empirical_pmf(batch, config.series.m_max);
  const auto analytic =
      pmf_convolution(schedule, lambda, config.t, config.series);

  CommandOutput out;
  out.table.columns = {"m", "count", "frequency", "analytic"};
  const double n = static_cast<double>(batch.requested());
  for (std::size_t m = 0; m < empirical.probs.size(); ++m) {
    out.table.rows.push_back(
        {as_int(m), static_cast<std::int64_t>(std::llround(empirical.probs[m] * n)),
         empirical.probs[m], analytic.probs[m]});
  }
  out.table.rows.push_back(
      {std::string("tail"),
       static_cast<std::int64_t>(std::llround(empirical.trunc_bound * n)),
       empirical.trunc_bound, std::max(0.0, 1.0 - analytic.total())});

  double sum = 0.0;
  for (auto c : batch.counts) sum += static_cast<double>(c);
  const double p0 = empirical.probs[0];
  out.summary.push_back("digest: " + batch.schedule_digest);
  out.summary.push_back("seed: " + std::to_string(config.seed) +
                        ", n: " + std::to_string(batch.requested()) +
                        ", n_overflow: " + std::to_string(batch.n_overflow));
  out.summary.push_back(
      "mean of finite counts: " +
      describe(batch.counts.empty() ? 0.0 : sum / batch.counts.size()));
  out.summary.push_back("P(count = 0): " + describe(p0) + " +/- " +
                        describe(std::sqrt(p0 * (1.0 - p0) / n)) +
                        " (analytic " + describe(analytic.probs[0]) + ")");
  if (batch.heavy_tail_warning()) {
    out.summary.push_back(
        "WARNING: more than 1% of draws overflowed; they are reported in the "
        "tail row");
  }
  if (!config.counts_path.empty()) {
    std::ofstream raw(config.counts_path);
    for (auto c : batch.counts) raw << c << '\n';
    out.summary.push_back("raw counts written to " + config.counts_path +
                          " (overflowed draws omitted)");
  }
  return out;
}

CommandOutput cmd_hitting(const RunConfig& config) {
  config.validate(true);
  const auto schedule = config.schedule();
  const Rate lambda(config.lambda);
  const auto grid = config.t_values();
  const auto mc = hitting_mc(schedule, lambda, grid, config.k, config.n,
                             RngSpec{config.seed, 0}, config.workers);
  CommandOutput out;
  out.table.columns = {"t", "analytic_cdf", "mc_estimate", "mc_se"};
  bool flagged = false;
  for (const auto& point : mc) {
    const auto exact = hitting_cdf(schedule, lambda, point.t, config.k,
                                   config.series);
    flagged = flagged || exact.low_confidence || !exact.converged;
    out.table.rows.push_back(
        {point.t, exact.value, point.estimate, point.standard_error});
  }
  if (flagged) out.exit_status = kExitLowConfidence;
  return out;
}

CommandOutput cmd_levy(const RunConfig& config) {
  config.validate(false);
  const Rate lambda(config.lambda);
  CommandOutput out;
  out.table.columns = {"segment", "alpha",     "j",
                       "nu",      "total_mass", "reconstruction_error"};
  for (std::size_t s = 0; s < config.segments.size(); ++s) {
    const auto [dt, alpha] = config.segments[s];
    const auto measure = levy_segment(alpha, lambda, config.levy_terms);
    const double target = segment_pgf(alpha, lambda, dt, config.probe_u);
    double total = 0.0;
    double exponent = 0.0;
    double power = 1.0;
    for (std::size_t j = 0; j < measure.masses.size(); ++j) {
      const double nu = measure.masses[j];
      power *= config.probe_u;
      total += nu;
      exponent += nu * (1.0 - power);
      out.table.rows.push_back({as_int(s + 1), alpha, as_int(j + 1), nu, total,
                                std::abs(std::exp(-dt * exponent) - target)});
    }
    out.summary.push_back(
        "segment " + std::to_string(s + 1) + ": total_mass " +
        describe(measure.total_mass) + " of lambda^alpha " +
        describe(std::pow(config.lambda, alpha)) + ", omitted " +
        describe(measure.omitted_mass()));
  }
  return out;
}

CommandOutput cmd_verify(const RunConfig& config,
                         const VerificationHooks& hooks) {
  config.validate(true);
  VerificationConfig vc;
  vc.segments = config.segments;
  vc.lambda = config.lambda;
  vc.t = config.t;
  vc.seed = config.seed;
  vc.n = config.n;
  vc.workers = config.workers;
  vc.series = config.series;
  vc.levy_terms = config.levy_terms;
  const auto report = run_verification(vc, hooks);

  CommandOutput out;
  out.report = report.to_json();
  out.table.columns = {"name", "statistic", "lower", "upper", "pass"};
  for (const auto& c : report.checks) {
    out.table.rows.push_back({c.name, c.statistic, c.lower, c.upper,
                              std::int64_t{c.pass ? 1 : 0}});
    out.summary.push_back(std::string(c.pass ? "PASS " : "FAIL ") + c.name +
                          ": " + describe(c.statistic) + " | " + c.details);
  }
  out.exit_status = report.all_passed() ? kExitSuccess : kExitVerificationFailed;
  return out;
}

}  // namespace voss
