#include <doctest.h>

#include <cmath>
#include <numbers>

#include <fuzzydyn/experiments.hpp>
#include <fuzzydyn/io_json.hpp>

#include "../support/generators.hpp"

using namespace fuzzydyn;
using testsupport::near;

TEST_CASE("delta search returns the tube radius for frozen dynamics") {
  Scenario scn = example_3_1_scenario();
  scn.ivp.rhs = LinearScalarRhs{ScalarFn::parse_or_throw("0")};
  scn.horizon = 5.0;
  const double delta = delta_search(scn, 0.5, 0.0);
  CHECK(near(delta, 0.5, 1e-3));
}

TEST_CASE("delta search reproduces the analytic modulus of the bounded-growth system") {
  const Scenario scn = example_3_1_scenario();
  const double delta = delta_search(scn, 1.0, 0.0);
  CHECK(near(delta, std::exp(-std::numbers::pi / 2.0), 2e-3));
}

TEST_CASE("delta search collapses below resolution under exponential growth") {
  Scenario scn = example_3_1_scenario();
  scn.ivp.rhs = LinearScalarRhs{ScalarFn::parse_or_throw("1")};
  scn.horizon = 30.0;
  const double delta = delta_search(scn, 0.5, 0.0);
  CHECK(delta <= 1e-9);
}

TEST_CASE("delta search grows with the tube radius") {
  Scenario scn = example_3_1_scenario();
  scn.horizon = 10.0;
  double prev = 0.0;
  for (double eps : {0.1, 0.3, 0.9}) {
    const double delta = delta_search(scn, eps, 0.0);
    CHECK(delta >= prev);
    prev = delta;
  }
}

TEST_CASE("delta search is seed-invariant and validates the tube") {
  Scenario a = example_3_1_scenario(0);
  Scenario b = example_3_1_scenario(12345);
  a.horizon = b.horizon = 10.0;
  CHECK(delta_search(a, 0.5, 1.0) == delta_search(b, 0.5, 1.0));
  CHECK_THROWS_AS((void)delta_search(a, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)delta_search(a, 100.0, 0.0), std::invalid_argument);
}

TEST_CASE("decay fit on reference trajectories") {
  const Scenario scn = crisp_exponential_scenario();
  const auto traj = solve(scn.ivp);
  REQUIRE(traj.ok());
  const auto fit = decay_fit(traj.value());
  REQUIRE(fit.ok());
  CHECK(near(fit.value().rate, 1.0, 1e-3));
  CHECK(fit.value().residual < 1e-6);

  // Frozen dynamics: zero rate.
  Scenario frozen = crisp_exponential_scenario();
  frozen.ivp.rhs = LinearScalarRhs{ScalarFn::parse_or_throw("0")};
  const auto flat = solve(frozen.ivp);
  REQUIRE(flat.ok());
  const auto flat_fit = decay_fit(flat.value());
  REQUIRE(flat_fit.ok());
  CHECK(std::abs(flat_fit.value().rate) <= 1e-9);

  // The zero trajectory has no log-distance.
  Scenario zero = crisp_exponential_scenario();
  zero.ivp.x0 = FuzzyBox::zero(zero.ivp.x0.grid(), 1);
  const auto z = solve(zero.ivp);
  REQUIRE(z.ok());
  CHECK(!decay_fit(z.value()).ok());
}

TEST_CASE("crisp exponential report passes end to end") {
  const EmpiricalReport report = run_crisp_exponential();
  CHECK(report.all_pass());
  REQUIRE(report.certificate.has_value());
  CHECK(report.certificate->claim == StabilityClaim::UniformlyExponentiallyStable);
  REQUIRE(report.fit.has_value());
  CHECK(near(report.fit->rate, 1.0, 5e-3));

  // Serialization is self-consistent and the table lists every flag.
  const Json j = to_json(report);
  CHECK(j["all_pass"] == true);
  const std::string table = report_table(report);
  for (const auto& flag : report.flags)
    CHECK(table.find(flag.name) != std::string::npos);
}

TEST_CASE("reports are deterministic across repeated runs") {
  const Json a = to_json(run_crisp_exponential(0));
  const Json b = to_json(run_crisp_exponential(0));
  CHECK(a.dump() == b.dump());
  const Json c = to_json(run_crisp_exponential(99));
  CHECK(a.dump() == c.dump());  // seed shuffles execution order only
}
