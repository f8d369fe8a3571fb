#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "ccl/claims.hpp"

namespace ccl {

// ---------------------------------------------------------------------------
// Scenario study: eight combinations of delay law, accident law and cost law.
// ---------------------------------------------------------------------------

enum class DelayLaw { decreasing_beta, beta_mixture };
enum class AccidentLaw { truncated_mixed_normal, boundary_challenge };
enum class CostLaw { moderate, heavy };

struct ScenarioSpec {
  int id = 1;  // 1..8
  DelayLaw delay = DelayLaw::decreasing_beta;
  AccidentLaw accident = AccidentLaw::truncated_mixed_normal;
  CostLaw cost = CostLaw::moderate;
  std::size_t n = 0;
  std::uint64_t seed = 0;

  // Standard numbering: delay = decreasing beta for ids 1-4 and a beta
  // mixture for 5-8; accident = truncated mixed normal for ids 1,2,5,6 and
  // boundary challenge otherwise; cost = moderate for odd ids, heavy for
  // even.
  static ScenarioSpec from_id(int id, std::size_t n, std::uint64_t seed);
};

// Analytic ground truth for a scenario.  Cost laws factorize as
// E[Z | T=t, U=u] = m1(t) m2(u), so the cost-weighted marginals are
// f~_T(t) proportional to m1(t) f_T(t), and likewise for U; both are
// returned normalized to unit mass on [0,1].
struct ScenarioTruth {
  std::function<double(double)> f_t;
  std::function<double(double)> f_u;
  std::function<double(double)> m1;  // delay factor of the conditional mean
  std::function<double(double)> m2;  // accident factor
  std::function<double(double)> weighted_f_t;
  std::function<double(double)> weighted_f_u;

  double mean_cost(double t, double u) const { return m1(t) * m2(u); }
};

ScenarioTruth scenario_truth(const ScenarioSpec& spec);

// Draw (t, u, z) triples from the scenario laws, keeping only pairs with
// t + u <= 1, until n records are accepted.  Deterministic in spec.seed.
// Throws std::runtime_error if the empirical acceptance rate falls below
// 1e-4 (misconfigured laws).
ClaimDataset simulate_scenario(const ScenarioSpec& spec);

// Reserve fraction implied by the true cost-weighted densities: mass of
// {t+u > 1} over mass of {t+u <= 1}, on a grid with >= 4000^2 effective
// cells.
double true_reserve_fraction(const ScenarioSpec& spec);
double true_reserve_fraction(const std::function<double(double)>& weighted_f_t,
                             const std::function<double(double)>& weighted_f_u,
                             std::size_t grid_points = 4097);

// ---------------------------------------------------------------------------
// Mobile-phone micro model: daily event log over a 360-day-year calendar.
// ---------------------------------------------------------------------------

struct MicroPolicy {
  std::int32_t underwriting_day = 0;  // 1-based calendar day
  std::int8_t type = 0;   // 0 breakage; 1 +oxidation; 2 +oxidation+theft
  std::int8_t brand = 0;  // 0..3
  std::int8_t model = 0;  // 0..3
  double price = 0.0;
};

struct MicroClaim {
  std::size_t policy = 0;        // index into MicroEventLog::policies
  std::int8_t incident_type = 0; // 0 breakage, 1 oxidation, 2 theft
  std::int32_t incident_day = 0;
  std::int32_t reporting_day = 0;
  std::int32_t payment_day = 0;
  double amount = 0.0;
};

struct MicroEventLog {
  std::vector<MicroPolicy> policies;
  std::vector<MicroClaim> claims;
};

// Simulates policies underwritten at 700/day over `underwriting_days` days
// (default two 360-day years).  Each policy covers the 360 days after the
// underwriting day; at most one incident per policy (competing exponential
// clocks over the covered perils; theft hazard scales with the model index).
// Reporting and settlement delays are drawn on the daily grid from the
// discrete laws induced by the continuous delay hazards; the settlement gap
// lies in [11, 50] days.  Deterministic in the seed.
MicroEventLog simulate_micro(std::uint64_t seed,
                             std::int32_t underwriting_days = 720);

// Snapshot at a valuation day: claims paid by that day become records with
// u = incident_day - 1, t = payment_day - incident_day, z = amount and
// horizon = valuation day (original units; normalize before estimating).
// The truth is the realized outstanding amount: payments after the valuation
// day for incidents on or before it.  Throws if the valuation day precedes
// the first incident.
struct MicroSnapshot {
  ClaimDataset dataset;
  double true_outstanding = 0.0;
};

MicroSnapshot micro_snapshot(const MicroEventLog& log, std::int32_t valuation_day);

}  // namespace ccl
