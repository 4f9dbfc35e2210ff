#include <doctest.h>

#include <algorithm>

#include "voss/verification.hpp"

namespace {

const voss::Check& find(const voss::VerificationReport& r, const std::string& name) {
  const auto it = std::find_if(r.checks.begin(), r.checks.end(),
                               [&](const voss::Check& c) { return c.name == name; });
  REQUIRE(it != r.checks.end());
  return *it;
}

voss::VerificationConfig small() {
  voss::VerificationConfig c;
  c.n = 5000;
  return c;
}

}  // namespace

TEST_CASE("underpowered or malformed configurations are rejected") {
  auto c = small();
  c.n = 10;
  CHECK_THROWS_AS((void)voss::run_verification(c), voss::ValidationError);
  c = small();
  c.series.m_max = 5;
  c.lambda = -1.0;
  try {
    (void)voss::run_verification(c);
    FAIL("expected a validation error");
  } catch (const voss::ValidationError& e) {
    CHECK(e.problems().size() == 2);
  }
}

TEST_CASE("report covers every check and is reproducible") {
  const auto a = voss::run_verification(small());
  const auto b = voss::run_verification(small());
  CHECK(a.to_json().dump() == b.to_json().dump());
  for (const char* name :
       {"oracle_equivalence", "normalization", "laplace_transform_z",
        "laplace_transform_se", "distributional_identity",
        "simulation_vs_analytics", "pde_convergence_t0.25",
        "pde_convergence_t0.75", "ode_residual", "poisson_collapse",
        "stable_ks_half", "stable_self_similarity", "levy_reconstruction",
        "hitting_coverage"}) {
    CAPTURE(name);
    (void)find(a, name);
  }
  CHECK(find(a, "oracle_equivalence").pass);
  CHECK(find(a, "poisson_collapse").pass);
  CHECK(find(a, "normalization").pass);
  const auto json = a.to_json();
  CHECK(json["seed"] == 42);
  CHECK(json["checks"][0]["comparison"] == "<=");
  CHECK(json["checks"][0].contains("details"));
}

TEST_CASE("a perturbed analytic pmf is caught") {
  voss::VerificationHooks hooks;
  hooks.perturb_analytic_pmf = [](voss::PmfTable& t) {
    t.probs[1] += 1e-3;
    t.probs[2] -= 1e-3;
  };
  const auto report = voss::run_verification(small(), hooks);
  CHECK_FALSE(find(report, "oracle_equivalence").pass);
  CHECK_FALSE(report.all_passed());
}
