#include "ccl/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

#include "ccl/quadrature.hpp"
#include "ccl/reserving.hpp"
#include "ccl/rng.hpp"

namespace ccl {

namespace {

constexpr double kPi = 3.14159265358979323846;

double beta_pdf(double x, double a, double b) {
  if (x < 0.0 || x > 1.0) return 0.0;
  if (x == 0.0) return a < 1.0 ? std::numeric_limits<double>::infinity()
                               : (a == 1.0 ? b : 0.0);
  if (x == 1.0) return b < 1.0 ? std::numeric_limits<double>::infinity()
                               : (b == 1.0 ? a : 0.0);
  double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - lbeta);
}

double normal_pdf(double x, double mu, double sigma) {
  double s = (x - mu) / sigma;
  return std::exp(-0.5 * s * s) / (sigma * std::sqrt(2.0 * kPi));
}

double normal_cdf(double x, double mu, double sigma) {
  return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
}

// Truncated 0.5 N(0.35, 0.12^2) + 0.5 N(0.7, 0.08^2) on [0,1].
double mixed_normal_mass() {
  static const double mass =
      0.5 * (normal_cdf(1.0, 0.35, 0.12) - normal_cdf(0.0, 0.35, 0.12)) +
      0.5 * (normal_cdf(1.0, 0.7, 0.08) - normal_cdf(0.0, 0.7, 0.08));
  return mass;
}

double delay_pdf(DelayLaw law, double t) {
  switch (law) {
    case DelayLaw::decreasing_beta:
      return beta_pdf(t, 1.0, 3.0);
    case DelayLaw::beta_mixture:
      return 0.6 * beta_pdf(t, 2.0, 10.0) + 0.4 * beta_pdf(t, 8.0, 3.0);
  }
  return 0.0;
}

double accident_pdf(AccidentLaw law, double u) {
  switch (law) {
    case AccidentLaw::truncated_mixed_normal:
      if (u < 0.0 || u > 1.0) return 0.0;
      return (0.5 * normal_pdf(u, 0.35, 0.12) + 0.5 * normal_pdf(u, 0.7, 0.08)) /
             mixed_normal_mass();
    case AccidentLaw::boundary_challenge:
      return beta_pdf(u, 6.0, 1.0);
  }
  return 0.0;
}

double m1_factor(CostLaw law, double t) {
  return law == CostLaw::moderate ? t + 0.75 : t;
}

double m2_factor(CostLaw law, double u) {
  return law == CostLaw::moderate ? (u - 0.25) * (u - 0.25) + 1.0
                                  : u * u - u + 1.0;
}

double draw_beta(std::mt19937_64& rng, double a, double b) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  double x = ga(rng);
  double y = gb(rng);
  return x / (x + y);
}

double draw_delay(std::mt19937_64& rng, DelayLaw law) {
  switch (law) {
    case DelayLaw::decreasing_beta:
      return draw_beta(rng, 1.0, 3.0);
    case DelayLaw::beta_mixture: {
      std::bernoulli_distribution first(0.6);
      return first(rng) ? draw_beta(rng, 2.0, 10.0) : draw_beta(rng, 8.0, 3.0);
    }
  }
  return 0.0;
}

double draw_accident(std::mt19937_64& rng, AccidentLaw law) {
  switch (law) {
    case AccidentLaw::truncated_mixed_normal: {
      std::bernoulli_distribution second(0.5);
      for (;;) {
        bool high = second(rng);
        std::normal_distribution<double> comp(high ? 0.7 : 0.35,
                                              high ? 0.08 : 0.12);
        double u = comp(rng);
        if (u >= 0.0 && u <= 1.0) return u;
      }
    }
    case AccidentLaw::boundary_challenge:
      return draw_beta(rng, 6.0, 1.0);
  }
  return 0.0;
}

}  // namespace

ScenarioSpec ScenarioSpec::from_id(int id, std::size_t n, std::uint64_t seed) {
  if (id < 1 || id > 8) {
    throw std::invalid_argument("scenario id must be in 1..8");
  }
  ScenarioSpec spec;
  spec.id = id;
  spec.delay = id <= 4 ? DelayLaw::decreasing_beta : DelayLaw::beta_mixture;
  int mod4 = (id - 1) % 4;  // 0,1: mixed normal; 2,3: boundary challenge
  spec.accident = mod4 < 2 ? AccidentLaw::truncated_mixed_normal
                           : AccidentLaw::boundary_challenge;
  spec.cost = id % 2 == 1 ? CostLaw::moderate : CostLaw::heavy;
  spec.n = n;
  spec.seed = seed;
  return spec;
}

ScenarioTruth scenario_truth(const ScenarioSpec& spec) {
  DelayLaw dl = spec.delay;
  AccidentLaw al = spec.accident;
  CostLaw cl = spec.cost;

  ScenarioTruth truth;
  truth.f_t = [dl](double t) { return delay_pdf(dl, t); };
  truth.f_u = [al](double u) { return accident_pdf(al, u); };
  truth.m1 = [cl](double t) { return m1_factor(cl, t); };
  truth.m2 = [cl](double u) { return m2_factor(cl, u); };

  auto wt_raw = [dl, cl](double t) { return m1_factor(cl, t) * delay_pdf(dl, t); };
  auto wu_raw = [al, cl](double u) { return m2_factor(cl, u) * accident_pdf(al, u); };
  double ct = integrate_simpson(wt_raw, 0.0, 1.0, 4096);
  double cu = integrate_simpson(wu_raw, 0.0, 1.0, 4096);
  truth.weighted_f_t = [wt_raw, ct](double t) { return wt_raw(t) / ct; };
  truth.weighted_f_u = [wu_raw, cu](double u) { return wu_raw(u) / cu; };
  return truth;
}

ClaimDataset simulate_scenario(const ScenarioSpec& spec) {
  if (spec.n == 0) throw std::invalid_argument("scenario sample size must be >= 1");
  std::mt19937_64 rng = make_stream(spec.seed, 0x5ce7a810, static_cast<std::uint64_t>(spec.id), spec.n);
  std::exponential_distribution<double> unit_exp(1.0);

  ClaimDataset ds;
  ds.horizon = 1.0;
  ds.unit_scale = 1.0;
  ds.records.reserve(spec.n);

  std::uint64_t attempts = 0;
  while (ds.records.size() < spec.n) {
    ++attempts;
    double t = draw_delay(rng, spec.delay);
    double u = draw_accident(rng, spec.accident);
    double z = m1_factor(spec.cost, t) * m2_factor(spec.cost, u) * unit_exp(rng);
    if (t + u <= 1.0) {
      ds.records.push_back({u, t, z});
    }
    if (attempts >= 10000 &&
        static_cast<double>(ds.records.size()) <
            1e-4 * static_cast<double>(attempts)) {
      throw std::runtime_error(
          "scenario acceptance rate below 1e-4: laws place almost no mass on "
          "t + u <= 1");
    }
  }
  return ds;
}

double true_reserve_fraction(const std::function<double(double)>& weighted_f_t,
                             const std::function<double(double)>& weighted_f_u,
                             std::size_t grid_points) {
  if (grid_points < 2) throw std::invalid_argument("grid_points must be >= 2");
  std::vector<double> vt(grid_points), vu(grid_points);
  for (std::size_t g = 0; g < grid_points; ++g) {
    double x = static_cast<double>(g) / static_cast<double>(grid_points - 1);
    vt[g] = weighted_f_t(x);
    vu[g] = weighted_f_u(x);
  }
  return reserve_fraction(GridDensity::from_values(std::move(vt)),
                          GridDensity::from_values(std::move(vu)));
}

double true_reserve_fraction(const ScenarioSpec& spec) {
  ScenarioTruth truth = scenario_truth(spec);
  return true_reserve_fraction(truth.weighted_f_t, truth.weighted_f_u, 4097);
}

// ---------------------------------------------------------------------------
// Micro model
// ---------------------------------------------------------------------------

namespace {

// P(reporting gap <= k days), k = 1..360: the continuous delay follows
// Beta(0.4, 10) on one 360-day year, discretized to daily CDF increments.
const std::vector<double>& reporting_gap_cdf() {
  static const std::vector<double> cdf = [] {
    std::vector<double> c(360);
    for (int k = 1; k <= 360; ++k) {
      c[k - 1] = boost::math::ibeta(0.4, 10.0, static_cast<double>(k) / 360.0);
    }
    c[359] = 1.0;
    return c;
  }();
  return cdf;
}

// P(settlement gap <= 10 + j days), j = 1..40: gap = 10 days + 40 days times
// a Beta(7, 7) variable, discretized likewise (support 11..50 days).
const std::vector<double>& payment_gap_cdf() {
  static const std::vector<double> cdf = [] {
    std::vector<double> c(40);
    for (int j = 1; j <= 40; ++j) {
      c[j - 1] = boost::math::ibeta(7.0, 7.0, static_cast<double>(j) / 40.0);
    }
    c[39] = 1.0;
    return c;
  }();
  return cdf;
}

int draw_from_cdf(std::mt19937_64& rng, const std::vector<double>& cdf) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = unif(rng);
  auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return static_cast<int>(it - cdf.begin());  // 0-based bin index
}

std::size_t pick(double u, const double* weights, std::size_t count) {
  double total = 0.0;
  for (std::size_t i = 0; i < count; ++i) total += weights[i];
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    acc += weights[i] / total;
    if (u < acc) return i;
  }
  return count - 1;
}

constexpr std::array<double, 3> kTypeProbs = {0.25, 0.45, 0.30};
constexpr std::array<double, 4> kBrandProbs = {0.45, 0.30, 0.15, 0.10};
constexpr std::array<double, 4> kBrandPrice = {600.0, 550.0, 300.0, 150.0};
constexpr std::array<double, 4> kModelProbs = {0.05, 0.10, 0.35, 0.50};
// Severity Beta parameters per incident type (breakage, oxidation, theft).
constexpr std::array<double, 3> kSeverityA = {2.0, 5.0, 5.0};
constexpr std::array<double, 3> kSeverityB = {5.0, 3.0, 0.5};

}  // namespace

MicroEventLog simulate_micro(std::uint64_t seed, std::int32_t underwriting_days) {
  if (underwriting_days < 1) {
    throw std::invalid_argument("underwriting_days must be >= 1");
  }
  MicroEventLog log;
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (std::int32_t day = 1; day <= underwriting_days; ++day) {
    std::mt19937_64 day_rng = make_stream(seed, 0xda11, static_cast<std::uint64_t>(day));
    std::poisson_distribution<int> count(700.0);
    int n_day = count(day_rng);

    for (int i = 0; i < n_day; ++i) {
      std::size_t index = log.policies.size();
      std::mt19937_64 rng = make_stream(seed, 0x9a11c4, index);

      MicroPolicy pol;
      pol.underwriting_day = day;
      pol.type = static_cast<std::int8_t>(pick(unif(rng), kTypeProbs.data(), 3));
      pol.brand = static_cast<std::int8_t>(pick(unif(rng), kBrandProbs.data(), 4));
      pol.model = static_cast<std::int8_t>(pick(unif(rng), kModelProbs.data(), 4));
      pol.price = kBrandPrice[pol.brand] * std::pow(1.15, pol.model);
      log.policies.push_back(pol);

      // Competing exponential clocks over the covered perils; yearly rates.
      double rates[3] = {0.15, pol.type >= 1 ? 0.05 : 0.0,
                         pol.type == 2 ? 0.05 * pol.model : 0.0};
      double total_rate = rates[0] + rates[1] + rates[2];
      std::exponential_distribution<double> wait(total_rate);
      double years = wait(rng);
      std::int32_t offset = static_cast<std::int32_t>(std::ceil(years * 360.0));
      if (offset < 1) offset = 1;
      if (offset > 360) continue;  // no incident within coverage

      MicroClaim claim;
      claim.policy = index;
      claim.incident_type = static_cast<std::int8_t>(pick(unif(rng), rates, 3));
      claim.incident_day = day + offset;
      claim.reporting_day =
          claim.incident_day + 1 + draw_from_cdf(rng, reporting_gap_cdf());
      claim.payment_day =
          claim.reporting_day + 11 + draw_from_cdf(rng, payment_gap_cdf());
      claim.amount = pol.price * draw_beta(rng, kSeverityA[claim.incident_type],
                                           kSeverityB[claim.incident_type]);
      log.claims.push_back(claim);
    }
  }
  return log;
}

MicroSnapshot micro_snapshot(const MicroEventLog& log, std::int32_t valuation_day) {
  std::int32_t first_incident = std::numeric_limits<std::int32_t>::max();
  for (const MicroClaim& c : log.claims) {
    first_incident = std::min(first_incident, c.incident_day);
  }
  if (log.claims.empty() || valuation_day < first_incident) {
    throw std::invalid_argument("valuation day precedes the first incident");
  }

  MicroSnapshot snap;
  snap.dataset.horizon = static_cast<double>(valuation_day);
  snap.dataset.unit_scale = 1.0;
  for (const MicroClaim& c : log.claims) {
    if (c.incident_day > valuation_day) continue;
    if (c.payment_day <= valuation_day) {
      snap.dataset.records.push_back(
          {static_cast<double>(c.incident_day - 1),
           static_cast<double>(c.payment_day - c.incident_day), c.amount});
    } else {
      snap.true_outstanding += c.amount;
    }
  }
  return snap;
}

}  // namespace ccl
