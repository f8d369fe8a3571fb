// Tests for the scenario generator, its analytic truth handles, and the
// phone-insurance micro model.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "ccl/claims.hpp"
#include "ccl/simulator.hpp"
#include "doctest.h"

namespace {

double simpson(const std::function<double(double)>& f, double a, double b,
               int steps) {
  double h = (b - a) / steps;
  double acc = f(a) + f(b);
  for (int i = 1; i < steps; ++i) {
    acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return acc * h / 3.0;
}

// Rejection sampler for a bounded density on [0,1].
double sample_pdf(std::mt19937_64& rng, const std::function<double(double)>& pdf,
                  double bound) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (;;) {
    double x = unif(rng);
    if (unif(rng) * bound <= pdf(x)) return x;
  }
}

double pdf_bound(const std::function<double(double)>& pdf) {
  double m = 0.0;
  for (int i = 0; i <= 4096; ++i) {
    double x = static_cast<double>(i) / 4096.0;
    double v = pdf(x);
    if (std::isfinite(v)) m = std::max(m, v);
  }
  return 1.05 * m;
}

}  // namespace

TEST_CASE("scenario ids map to the documented law combinations") {
  using ccl::AccidentLaw;
  using ccl::CostLaw;
  using ccl::DelayLaw;
  for (int id = 1; id <= 8; ++id) {
    auto spec = ccl::ScenarioSpec::from_id(id, 100, 7);
    CHECK(spec.id == id);
    CHECK(spec.n == 100);
    CHECK(spec.seed == 7);
    CHECK(spec.delay ==
          (id <= 4 ? DelayLaw::decreasing_beta : DelayLaw::beta_mixture));
    bool mixed_normal = (id - 1) % 4 < 2;  // ids 1,2,5,6
    CHECK(spec.accident == (mixed_normal ? AccidentLaw::truncated_mixed_normal
                                         : AccidentLaw::boundary_challenge));
    CHECK(spec.cost == (id % 2 == 1 ? CostLaw::moderate : CostLaw::heavy));
  }
  CHECK_THROWS_AS(ccl::ScenarioSpec::from_id(0, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(ccl::ScenarioSpec::from_id(9, 10, 1), std::invalid_argument);
}

TEST_CASE("scenario truth: normalized weighted densities and factorized means") {
  for (int id : {1, 2, 5, 8}) {
    auto spec = ccl::ScenarioSpec::from_id(id, 10, 1);
    auto truth = ccl::scenario_truth(spec);

    CHECK(simpson(truth.f_t, 0.0, 1.0, 4096) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(simpson(truth.f_u, 0.0, 1.0, 4096) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(simpson(truth.weighted_f_t, 0.0, 1.0, 4096) ==
          doctest::Approx(1.0).epsilon(1e-5));
    CHECK(simpson(truth.weighted_f_u, 0.0, 1.0, 4096) ==
          doctest::Approx(1.0).epsilon(1e-5));

    // weighted_f_t is proportional to m1 * f_t: the ratio is constant.
    double r1 = truth.weighted_f_t(0.2) / (truth.m1(0.2) * truth.f_t(0.2));
    double r2 = truth.weighted_f_t(0.6) / (truth.m1(0.6) * truth.f_t(0.6));
    CHECK(r1 == doctest::Approx(r2).epsilon(1e-9));
    double s1 = truth.weighted_f_u(0.3) / (truth.m2(0.3) * truth.f_u(0.3));
    double s2 = truth.weighted_f_u(0.8) / (truth.m2(0.8) * truth.f_u(0.8));
    CHECK(s1 == doctest::Approx(s2).epsilon(1e-9));

    CHECK(truth.mean_cost(0.4, 0.7) ==
          doctest::Approx(truth.m1(0.4) * truth.m2(0.7)).epsilon(1e-15));
  }

  // Moderate cost law: m1(t) = t + 0.75, m2(u) = (u - 0.25)^2 + 1.
  auto moderate = ccl::scenario_truth(ccl::ScenarioSpec::from_id(1, 10, 1));
  CHECK(moderate.m1(0.25) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(moderate.m2(0.25) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(moderate.m2(0.75) == doctest::Approx(1.25).epsilon(1e-15));
  // Heavy cost law: m1(t) = t, m2(u) = u^2 - u + 1.
  auto heavy = ccl::scenario_truth(ccl::ScenarioSpec::from_id(2, 10, 1));
  CHECK(heavy.m1(0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(heavy.m2(0.5) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("scenario samples: truncation, validity, determinism") {
  auto spec = ccl::ScenarioSpec::from_id(1, 10000, 42);
  auto ds = ccl::simulate_scenario(spec);
  REQUIRE(ds.size() == 10000);
  CHECK(ds.horizon == 1.0);
  CHECK_NOTHROW(ccl::validate(ds));
  double max_sum = 0.0;
  for (const auto& rec : ds.records) {
    max_sum = std::max(max_sum, rec.u + rec.t);
    CHECK(rec.z >= 0.0);
  }
  CHECK(max_sum <= 1.0);

  auto again = ccl::simulate_scenario(spec);
  REQUIRE(again.size() == ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(again.records[i].u == ds.records[i].u);
    CHECK(again.records[i].t == ds.records[i].t);
    CHECK(again.records[i].z == ds.records[i].z);
  }

  auto other_seed = spec;
  other_seed.seed = 43;
  auto different = ccl::simulate_scenario(other_seed);
  bool any_diff = false;
  for (std::size_t i = 0; i < ds.size() && !any_diff; ++i) {
    any_diff = different.records[i].u != ds.records[i].u;
  }
  CHECK(any_diff);

  CHECK_THROWS_AS(ccl::simulate_scenario(ccl::ScenarioSpec::from_id(1, 0, 1)),
                  std::invalid_argument);
}

TEST_CASE("scenario costs: cell means match the conditional mean") {
  // Conditional on (t, u) the cost is exponential with mean m1(t) m2(u), so
  // within any cell the average cost has mean (1/k) sum theta_i and standard
  // deviation sqrt(sum theta_i^2) / k.
  for (int id : {1, 6}) {
    auto spec = ccl::ScenarioSpec::from_id(id, 40000, 99 + id);
    auto ds = ccl::simulate_scenario(spec);
    auto truth = ccl::scenario_truth(spec);

    double sum_z = 0.0, sum_theta = 0.0, sum_theta2 = 0.0;
    std::size_t count = 0;
    for (const auto& rec : ds.records) {
      if (rec.t < 0.05 || rec.t > 0.25 || rec.u < 0.25 || rec.u > 0.55) continue;
      double theta = truth.mean_cost(rec.t, rec.u);
      sum_z += rec.z;
      sum_theta += theta;
      sum_theta2 += theta * theta;
      ++count;
    }
    REQUIRE(count > 200);
    double k = static_cast<double>(count);
    double se = std::sqrt(sum_theta2) / k;
    CHECK(std::fabs(sum_z / k - sum_theta / k) <= 3.0 * se);
  }
}

TEST_CASE("true reserve fraction: uniform handles give one, scenarios are finite") {
  auto uniform = [](double) { return 1.0; };
  CHECK(ccl::true_reserve_fraction(uniform, uniform) ==
        doctest::Approx(1.0).epsilon(1e-9));

  for (int id = 1; id <= 8; ++id) {
    double frac = ccl::true_reserve_fraction(ccl::ScenarioSpec::from_id(id, 10, 1));
    CHECK(frac > 0.0);
    CHECK(std::isfinite(frac));
  }

  CHECK_THROWS_AS(ccl::true_reserve_fraction(uniform, uniform, 1),
                  std::invalid_argument);
}

TEST_CASE("true reserve fraction: cross-check against an untruncated population") {
  // Draw (T, U, Z) from the scenario laws without truncation and compare the
  // realized outstanding-over-observed cost ratio with the quadrature value.
  for (int id : {1, 6}) {
    auto spec = ccl::ScenarioSpec::from_id(id, 10, 1);
    auto truth = ccl::scenario_truth(spec);
    double expect = ccl::true_reserve_fraction(spec);

    std::mt19937_64 rng(2718u + static_cast<unsigned>(id));
    std::exponential_distribution<double> unit_exp(1.0);
    double bt = pdf_bound(truth.f_t);
    double bu = pdf_bound(truth.f_u);

    const int n = 200000;
    double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
      double t = sample_pdf(rng, truth.f_t, bt);
      double u = sample_pdf(rng, truth.f_u, bu);
      double z = truth.mean_cost(t, u) * unit_exp(rng);
      double x = t + u > 1.0 ? z : 0.0;  // outstanding cost
      double y = t + u > 1.0 ? 0.0 : z;  // observed cost
      sx += x;
      sy += y;
      sxx += x * x;
      syy += y * y;
      sxy += x * y;
    }
    double mx = sx / n, my = sy / n;
    double vx = sxx / n - mx * mx;
    double vy = syy / n - my * my;
    double cxy = sxy / n - mx * my;
    double est = mx / my;
    // Delta-method standard error of the ratio of means.
    double var =
        (vx + est * est * vy - 2.0 * est * cxy) / (my * my * static_cast<double>(n));
    double se = std::sqrt(std::max(var, 0.0));
    CHECK(std::fabs(est - expect) <= 3.0 * se);
  }
}

TEST_CASE("micro model: structural bounds hold for every event") {
  auto log = ccl::simulate_micro(314, 120);
  REQUIRE(!log.policies.empty());
  REQUIRE(!log.claims.empty());

  // Poisson(700/day) policy count, one run: 3 sigma band.
  double lambda = 700.0 * 120.0;
  CHECK(std::fabs(static_cast<double>(log.policies.size()) - lambda) <=
        3.0 * std::sqrt(lambda));

  for (const auto& pol : log.policies) {
    CHECK(pol.underwriting_day >= 1);
    CHECK(pol.underwriting_day <= 120);
    CHECK(pol.type >= 0);
    CHECK(pol.type <= 2);
    CHECK(pol.brand >= 0);
    CHECK(pol.brand <= 3);
    CHECK(pol.model >= 0);
    CHECK(pol.model <= 3);
    CHECK(pol.price > 0.0);
  }

  std::set<std::size_t> with_claim;
  for (const auto& claim : log.claims) {
    const auto& pol = log.policies[claim.policy];
    // At most one incident per policy.
    CHECK(with_claim.insert(claim.policy).second);
    // Incident within the 360-day coverage window.
    CHECK(claim.incident_day >= pol.underwriting_day + 1);
    CHECK(claim.incident_day <= pol.underwriting_day + 360);
    // Reporting delay in (0, 360] days; settlement gap in [11, 50] days.
    CHECK(claim.reporting_day - claim.incident_day >= 1);
    CHECK(claim.reporting_day - claim.incident_day <= 360);
    CHECK(claim.payment_day - claim.reporting_day >= 11);
    CHECK(claim.payment_day - claim.reporting_day <= 50);
    // Payment is a proportion of the phone price.
    CHECK(claim.amount >= 0.0);
    CHECK(claim.amount <= pol.price);
    // Covered perils only: theft needs type 2, oxidation type >= 1.
    if (claim.incident_type == 1) CHECK(pol.type >= 1);
    if (claim.incident_type == 2) CHECK(pol.type == 2);
  }
}

TEST_CASE("micro model: prices, breakage incidence, determinism") {
  auto log = ccl::simulate_micro(4040, 90);

  // Price table: brand basis price times 1.15^model; first-brand model-3
  // phones cost 600 * 1.15^3.
  bool saw_brand0_model3 = false;
  for (const auto& pol : log.policies) {
    if (pol.brand == 0 && pol.model == 3) {
      saw_brand0_model3 = true;
      CHECK(pol.price == doctest::Approx(600.0 * 1.15 * 1.15 * 1.15).epsilon(1e-12));
    }
    if (pol.brand == 2 && pol.model == 0) {
      CHECK(pol.price == doctest::Approx(300.0).epsilon(1e-12));
    }
  }
  CHECK(saw_brand0_model3);

  // Breakage-only policies (type 0) have a single Exp(0.15) clock; the
  // incidence within one coverage year is 1 - exp(-0.15).
  std::vector<char> claimed(log.policies.size(), 0);
  for (const auto& claim : log.claims) claimed[claim.policy] = 1;
  std::size_t type0 = 0, type0_claims = 0;
  for (std::size_t i = 0; i < log.policies.size(); ++i) {
    if (log.policies[i].type != 0) continue;
    ++type0;
    type0_claims += claimed[i];
  }
  REQUIRE(type0 > 5000);
  double p = 1.0 - std::exp(-0.15);
  double se = std::sqrt(p * (1.0 - p) / static_cast<double>(type0));
  CHECK(std::fabs(static_cast<double>(type0_claims) / static_cast<double>(type0) -
                  p) <= 3.0 * se);

  // Bitwise determinism in the seed.
  auto log2 = ccl::simulate_micro(4040, 90);
  REQUIRE(log2.policies.size() == log.policies.size());
  REQUIRE(log2.claims.size() == log.claims.size());
  for (std::size_t i = 0; i < log.claims.size(); ++i) {
    CHECK(log2.claims[i].policy == log.claims[i].policy);
    CHECK(log2.claims[i].incident_day == log.claims[i].incident_day);
    CHECK(log2.claims[i].reporting_day == log.claims[i].reporting_day);
    CHECK(log2.claims[i].payment_day == log.claims[i].payment_day);
    CHECK(log2.claims[i].amount == log.claims[i].amount);
  }

  auto log3 = ccl::simulate_micro(4041, 90);
  CHECK(log3.policies.size() != log.policies.size());

  CHECK_THROWS_AS(ccl::simulate_micro(1, 0), std::invalid_argument);
}

TEST_CASE("micro snapshot: truth accounting and record geometry") {
  auto log = ccl::simulate_micro(555, 60);
  REQUIRE(!log.claims.empty());

  std::int32_t first_incident = log.claims[0].incident_day;
  std::int32_t last_payment = 0;
  double total_amount = 0.0;
  for (const auto& claim : log.claims) {
    first_incident = std::min(first_incident, claim.incident_day);
    last_payment = std::max(last_payment, claim.payment_day);
    total_amount += claim.amount;
  }

  // After the final settlement everything is paid.
  auto final_snap = ccl::micro_snapshot(log, last_payment);
  CHECK(final_snap.true_outstanding == 0.0);
  CHECK(final_snap.dataset.records.size() == log.claims.size());
  double paid = 0.0;
  for (const auto& rec : final_snap.dataset.records) paid += rec.z;
  CHECK(paid == doctest::Approx(total_amount).epsilon(1e-12));

  // At the first incident day nothing is paid yet (settlement needs at least
  // 12 further days), so the dataset is empty and the truth carries every
  // amount incurred so far.
  auto early_snap = ccl::micro_snapshot(log, first_incident);
  CHECK(early_snap.dataset.records.empty());
  double incurred = 0.0;
  for (const auto& claim : log.claims) {
    if (claim.incident_day <= first_incident) incurred += claim.amount;
  }
  CHECK(early_snap.true_outstanding == doctest::Approx(incurred).epsilon(1e-12));

  // Mid-stream snapshot: records respect u + t <= horizon and normalize
  // cleanly; truth + paid covers exactly the incurred-to-date amounts.
  std::int32_t mid = first_incident + 200;
  auto snap = ccl::micro_snapshot(log, mid);
  CHECK(snap.dataset.horizon == static_cast<double>(mid));
  for (const auto& rec : snap.dataset.records) {
    CHECK(rec.u >= 0.0);
    CHECK(rec.t >= 0.0);
    CHECK(rec.u + rec.t <= snap.dataset.horizon);
  }
  CHECK_NOTHROW(ccl::validate(snap.dataset));
  auto normalized = ccl::normalize(snap.dataset);
  CHECK(normalized.unit_scale == static_cast<double>(mid));
  CHECK_NOTHROW(ccl::validate(normalized));

  double mid_paid = 0.0;
  for (const auto& rec : snap.dataset.records) mid_paid += rec.z;
  double mid_incurred = 0.0;
  for (const auto& claim : log.claims) {
    if (claim.incident_day <= mid) mid_incurred += claim.amount;
  }
  CHECK(mid_paid + snap.true_outstanding ==
        doctest::Approx(mid_incurred).epsilon(1e-12));

  CHECK_THROWS_AS(ccl::micro_snapshot(log, first_incident - 1),
                  std::invalid_argument);
}
