#include "ccl/survival.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

namespace ccl {

namespace {

double step_eval(const std::vector<double>& times, const std::vector<double>& vals,
                 double initial, double s, bool strict) {
  auto it = strict ? std::lower_bound(times.begin(), times.end(), s)
                   : std::upper_bound(times.begin(), times.end(), s);
  if (it == times.begin()) return initial;
  return vals[static_cast<std::size_t>(it - times.begin()) - 1];
}

}  // namespace

double CumHazardEstimate::value(double s) const {
  return step_eval(times, cumulative, 0.0, s, /*strict=*/false);
}

StepFunction CumHazardEstimate::to_step_function() const {
  return StepFunction(times, cumulative, 0.0);
}

double SurvivalEstimate::value(double s) const {
  return step_eval(times, values, 1.0, s, /*strict=*/false);
}

double SurvivalEstimate::left_limit(double s) const {
  return step_eval(times, values, 1.0, s, /*strict=*/true);
}

StepFunction SurvivalEstimate::to_step_function() const {
  return StepFunction(times, values, 1.0);
}

CumHazardEstimate aalen_weighted(const ClaimDataset& ds) {
  if (!ds.normalized())
    throw std::invalid_argument("aalen_weighted: dataset must be normalized (horizon 1)");
  validate(ds);
  const std::size_t n = ds.size();
  double total_z = 0.0;
  for (const ClaimRecord& r : ds.records) total_z += r.z;
  if (!(total_z > 0.0))
    throw std::invalid_argument("aalen_weighted: dataset has no positive amounts");

  // Records grouped by reversed payment time; ties pool into one jump.  Ties
  // are ordered by the full value tuple so pooled sums are bitwise independent
  // of the input record order.
  std::vector<std::size_t> by_stop(n);
  for (std::size_t i = 0; i < n; ++i) by_stop[i] = i;
  auto stop_of = [&ds](std::size_t i) { return ds.horizon - ds.records[i].t; };
  std::sort(by_stop.begin(), by_stop.end(), [&](std::size_t a, std::size_t b) {
    return std::tuple(stop_of(a), ds.records[a].u, ds.records[a].z) <
           std::tuple(stop_of(b), ds.records[b].u, ds.records[b].z);
  });

  // Start times sorted descending for the accretion sweep below.
  std::vector<double> starts_desc(n);
  std::vector<double> starts_z(n);
  {
    std::vector<std::size_t> by_start(n);
    for (std::size_t i = 0; i < n; ++i) by_start[i] = i;
    std::sort(by_start.begin(), by_start.end(), [&](std::size_t a, std::size_t b) {
      return std::tuple(ds.records[a].u, stop_of(a), ds.records[a].z) >
             std::tuple(ds.records[b].u, stop_of(b), ds.records[b].z);
    });
    for (std::size_t k = 0; k < n; ++k) {
      starts_desc[k] = ds.records[by_start[k]].u;
      starts_z[k] = ds.records[by_start[k]].z;
    }
  }

  // Tie-group boundaries (distinct reversed payment times, ascending).
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t k = 0; k < n;) {
    std::size_t j = k + 1;
    while (j < n && stop_of(by_stop[j]) == stop_of(by_stop[k])) ++j;
    groups.emplace_back(k, j);
    k = j;
  }

  // Sweep the distinct jump times from the largest down.  The weighted
  // exposure at a jump is assembled as (tied mass at risk) + (mass of strictly
  // later stops that has already started), both accumulated by additions of
  // nonnegative terms.  This keeps increments <= 1 whenever every tied jumper
  // is at risk, with no cancellation-prone subtraction of large totals.
  const std::size_t J = groups.size();
  std::vector<double> jump_inc(J, 0.0);
  double sum_later = 0.0;   // sum of z over records with T^R > current s
  double sum_u_ge = 0.0;    // sum of z over records with u >= current s
  std::size_t pT = n;       // walks by_stop from the back (largest stops first)
  std::size_t pU = 0;       // walks starts_desc
  for (std::size_t g = J; g-- > 0;) {
    const auto [lo, hi] = groups[g];
    const double s = stop_of(by_stop[lo]);
    while (pT > hi) sum_later += ds.records[by_stop[--pT]].z;
    while (pU < n && starts_desc[pU] >= s) sum_u_ge += starts_z[pU++];

    double zsum = 0.0;          // pooled jump mass
    double zsum_at_risk = 0.0;  // tied mass with u < s (at risk at its own jump)
    double z_boundary = 0.0;    // tied mass with u == s (not at risk)
    for (std::size_t k = lo; k < hi; ++k) {
      const ClaimRecord& r = ds.records[by_stop[k]];
      zsum += r.z;
      if (r.u < s)
        zsum_at_risk += r.z;
      else
        z_boundary += r.z;
    }
    if (zsum <= 0.0) continue;  // zero-mass tie group: no jump

    // Later-stop records at risk: started (u < s) among those with T^R > s.
    const double later_at_risk = std::max(sum_later - (sum_u_ge - z_boundary), 0.0);
    const double w = zsum_at_risk + later_at_risk;
    if (!(w > 0.0))
      throw std::runtime_error(
          "aalen_weighted: zero weighted exposure at a positive-mass jump (s = " +
          std::to_string(s) + ")");
    const double inc = zsum / w;
    if (inc > 1.0)
      throw std::runtime_error(
          "aalen_weighted: hazard increment above 1; tied payment not at risk at s = " +
          std::to_string(s));
    jump_inc[g] = inc;
  }

  CumHazardEstimate out;
  out.times.resize(J);
  out.increments.resize(J);
  out.cumulative.resize(J);
  double cum = 0.0;
  for (std::size_t g = 0; g < J; ++g) {
    out.times[g] = stop_of(by_stop[groups[g].first]);
    out.increments[g] = jump_inc[g];
    cum += jump_inc[g];
    out.cumulative[g] = cum;
  }
  return out;
}

SurvivalEstimate km_weighted(const ClaimDataset& ds) {
  CumHazardEstimate a = aalen_weighted(ds);
  SurvivalEstimate out;
  out.times = std::move(a.times);
  out.increments = std::move(a.increments);
  out.values.resize(out.times.size());
  double s = 1.0;
  for (std::size_t k = 0; k < out.times.size(); ++k) {
    s = s * (1.0 - out.increments[k]);
    out.values[k] = s;
  }
  return out;
}

std::vector<double> survival_left_limits(const ClaimDataset& ds, const SurvivalEstimate& s) {
  std::vector<double> out(ds.size());
  for (std::size_t i = 0; i < ds.records.size(); ++i)
    out[i] = s.left_limit(ds.horizon - ds.records[i].t);
  return out;
}

}  // namespace ccl
