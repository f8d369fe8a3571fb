#include "ccl/claims.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ccl {

void validate(const ClaimDataset& ds) {
  if (!(ds.horizon > 0.0) || !std::isfinite(ds.horizon))
    throw std::invalid_argument("ClaimDataset: horizon must be positive and finite");
  if (!(ds.unit_scale > 0.0) || !std::isfinite(ds.unit_scale))
    throw std::invalid_argument("ClaimDataset: unit_scale must be positive and finite");
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    const ClaimRecord& r = ds.records[i];
    if (!std::isfinite(r.u) || !std::isfinite(r.t) || !std::isfinite(r.z))
      throw std::invalid_argument("ClaimDataset: non-finite field in record " + std::to_string(i));
    if (r.u < 0.0)
      throw std::invalid_argument("ClaimDataset: negative accident time in record " +
                                  std::to_string(i));
    if (r.t < 0.0)
      throw std::invalid_argument("ClaimDataset: negative delay in record " + std::to_string(i));
    if (r.z < 0.0)
      throw std::invalid_argument("ClaimDataset: negative amount in record " + std::to_string(i));
    if (r.u + r.t > ds.horizon)
      throw std::invalid_argument("ClaimDataset: record " + std::to_string(i) +
                                  " paid after the horizon (u + t > horizon)");
  }
}

ClaimDataset normalize(const ClaimDataset& ds) {
  validate(ds);
  ClaimDataset out;
  out.records.reserve(ds.records.size());
  const double T = ds.horizon;
  for (const ClaimRecord& r : ds.records) {
    ClaimRecord s{r.u / T, r.t / T, r.z};
    // Division may round each coordinate up by one ulp; restore u + t <= 1.
    if (s.u + s.t > 1.0) s.t = 1.0 - s.u;
    out.records.push_back(s);
  }
  out.horizon = 1.0;
  out.unit_scale = ds.unit_scale * T;
  return out;
}

double reversed_delay(double t, double horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("reversed_delay: horizon must be positive");
  if (!(t >= 0.0) || !(t <= horizon))
    throw std::invalid_argument("reversed_delay: t outside [0, horizon]");
  return horizon - t;
}

double exposure_count(const ClaimDataset& ds, double s) {
  double n = 0.0;
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    const ClaimRecord& r = ds.records[i];
    if (r.u < s && s <= ds.horizon - r.t) n += 1.0;
  }
  return n;
}

double weighted_exposure(const ClaimDataset& ds, double s) {
  double w = 0.0;
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    const ClaimRecord& r = ds.records[i];
    if (r.u < s && s <= ds.horizon - r.t) w += r.z;
  }
  return w;
}

double exposure_integral(const ClaimDataset& ds, double a, double b, bool weighted) {
  if (a > b) throw std::invalid_argument("exposure_integral: a > b");
  return ExposureProcess(ds).integral(a, b, weighted);
}

namespace {

struct SortedEvents {
  std::vector<double> x;
  std::vector<double> w;
};

SortedEvents sort_events(std::vector<std::pair<double, double>>& ev) {
  // Tie-break on the weight so prefix sums do not depend on input order.
  std::sort(ev.begin(), ev.end());
  SortedEvents out;
  out.x.reserve(ev.size());
  out.w.reserve(ev.size());
  for (const auto& [x, w] : ev) {
    out.x.push_back(x);
    out.w.push_back(w);
  }
  return out;
}

void prefix_sums(const SortedEvents& ev, std::vector<double>& cw, std::vector<double>& cwt,
                 std::vector<double>& cc, std::vector<double>& cct) {
  const std::size_t n = ev.x.size();
  cw.assign(n + 1, 0.0);
  cwt.assign(n + 1, 0.0);
  cc.assign(n + 1, 0.0);
  cct.assign(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    cw[k + 1] = cw[k] + ev.w[k];
    cwt[k + 1] = cwt[k] + ev.w[k] * ev.x[k];
    cc[k + 1] = cc[k] + 1.0;
    cct[k + 1] = cct[k] + ev.x[k];
  }
}

}  // namespace

ExposureProcess::ExposureProcess(const ClaimDataset& ds) {
  std::vector<std::pair<double, double>> starts, stops;
  starts.reserve(ds.size());
  stops.reserve(ds.size());
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    starts.emplace_back(ds.records[i].u, ds.records[i].z);
    stops.emplace_back(ds.horizon - ds.records[i].t, ds.records[i].z);
  }
  SortedEvents s = sort_events(starts);
  SortedEvents e = sort_events(stops);
  start_ = std::move(s.x);
  stop_ = std::move(e.x);
  prefix_sums(SortedEvents{start_, std::move(s.w)}, start_cumw_, start_cumwt_, start_cumc_,
              start_cumct_);
  prefix_sums(SortedEvents{stop_, std::move(e.w)}, stop_cumw_, stop_cumwt_, stop_cumc_,
              stop_cumct_);
}

double ExposureProcess::count(double s) const {
  // #{u < s} - #{T^R < s}; valid because u_i <= T_i^R for every record.
  auto a = std::lower_bound(start_.begin(), start_.end(), s) - start_.begin();
  auto b = std::lower_bound(stop_.begin(), stop_.end(), s) - stop_.begin();
  return start_cumc_[static_cast<std::size_t>(a)] - stop_cumc_[static_cast<std::size_t>(b)];
}

double ExposureProcess::weighted(double s) const {
  auto a = std::lower_bound(start_.begin(), start_.end(), s) - start_.begin();
  auto b = std::lower_bound(stop_.begin(), stop_.end(), s) - stop_.begin();
  return start_cumw_[static_cast<std::size_t>(a)] - stop_cumw_[static_cast<std::size_t>(b)];
}

double ExposureProcess::integral(double a, double b, bool use_weights) const {
  if (b <= a) return 0.0;
  // integral_a^b I(x < s) ds = b - clamp(x; a, b), so the exposure integral is
  // sum_i w_i * (clamp(stop_i) - clamp(start_i)); each clamped sum has a
  // closed form over the sorted events.
  auto clamped_sum = [a, b](const std::vector<double>& x, const std::vector<double>& cw,
                            const std::vector<double>& cwt) {
    auto lo = std::lower_bound(x.begin(), x.end(), a) - x.begin();
    auto hi = std::upper_bound(x.begin(), x.end(), b) - x.begin();
    const double total = cw.back();
    double s = cw[static_cast<std::size_t>(lo)] * a;                   // x < a -> a
    s += cwt[static_cast<std::size_t>(hi)] - cwt[static_cast<std::size_t>(lo)];  // in range
    s += (total - cw[static_cast<std::size_t>(hi)]) * b;               // x > b -> b
    return s;
  };
  if (use_weights)
    return clamped_sum(stop_, stop_cumw_, stop_cumwt_) -
           clamped_sum(start_, start_cumw_, start_cumwt_);
  return clamped_sum(stop_, stop_cumc_, stop_cumct_) -
         clamped_sum(start_, start_cumc_, start_cumct_);
}

}  // namespace ccl
