#include "ccl/reserving.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ccl/quadrature.hpp"

namespace ccl {

namespace {

double clamp01(double x) { return std::min(std::max(x, 0.0), 1.0); }

std::size_t period_count(double period_delta) {
  if (!(period_delta > 0.0) || period_delta > 1.0) {
    throw std::invalid_argument("period_delta must lie in (0, 1]");
  }
  return static_cast<std::size_t>(std::ceil(1.0 / period_delta - 1e-9));
}

}  // namespace

GridDensity::GridDensity(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw std::invalid_argument("grid density needs at least two nodes");
  }
  for (double& v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("grid density node value is not finite");
    }
    v = std::max(v, 0.0);
  }
  dx_ = 1.0 / static_cast<double>(values_.size() - 1);
  cum_.resize(values_.size());
  cum_[0] = 0.0;
  for (std::size_t g = 1; g < values_.size(); ++g) {
    cum_[g] = cum_[g - 1] + 0.5 * (values_[g - 1] + values_[g]) * dx_;
  }
}

GridDensity GridDensity::from_values(std::vector<double> node_values) {
  return GridDensity(std::move(node_values));
}

GridDensity GridDensity::from_estimate(const DensityEstimate& estimate) {
  if (estimate.orientation != TimeOrientation::natural) {
    throw std::invalid_argument("grid density requires a natural-time estimate");
  }
  std::vector<double> vals(estimate.values.size());
  for (std::size_t g = 0; g < vals.size(); ++g) {
    vals[g] = estimate.flags[g] ? 0.0 : estimate.values[g];
  }
  return GridDensity(std::move(vals));
}

double GridDensity::operator()(double t) const {
  if (t < 0.0 || t > 1.0) return 0.0;
  double pos = t / dx_;
  std::size_t g = std::min(static_cast<std::size_t>(pos), values_.size() - 2);
  double frac = pos - static_cast<double>(g);
  return values_[g] + (values_[g + 1] - values_[g]) * frac;
}

double GridDensity::cumulative(double t) const {
  t = clamp01(t);
  double pos = t / dx_;
  std::size_t g = std::min(static_cast<std::size_t>(pos), values_.size() - 2);
  double tau = t - static_cast<double>(g) * dx_;
  double slope = (values_[g + 1] - values_[g]) / dx_;
  return cum_[g] + values_[g] * tau + 0.5 * slope * tau * tau;
}

double band_mass(const GridDensity& ft, const GridDensity& fu, double diag_lo,
                 double diag_hi, double u_lo, double u_hi) {
  double lo = std::max(u_lo, 0.0);
  double hi = std::min(u_hi, 1.0);
  if (!(hi > lo) || diag_hi <= diag_lo) return 0.0;

  // Outer integrand fu(u) * [F_T(diag_hi - u) - F_T(diag_lo - u)] is a
  // polynomial of degree <= 3 between breakpoints: fu-grid nodes plus the
  // points where a clamped inner limit crosses an ft-grid node.
  std::vector<double> breaks;
  breaks.reserve(fu.grid_size() + 2 * ft.grid_size() + 2);
  for (std::size_t g = 0; g < fu.grid_size(); ++g) breaks.push_back(fu.node(g));
  for (std::size_t k = 0; k < ft.grid_size(); ++k) {
    breaks.push_back(diag_lo - ft.node(k));
    breaks.push_back(diag_hi - ft.node(k));
  }
  std::vector<double> pieces = clipped_breakpoints(breaks, lo, hi);

  auto integrand = [&](double u) {
    return fu(u) *
           (ft.cumulative(clamp01(diag_hi - u)) - ft.cumulative(clamp01(diag_lo - u)));
  };
  return integrate_piecewise_gl(integrand, pieces, 3);
}

double reserve_fraction(const GridDensity& ft, const GridDensity& fu) {
  double den = band_mass(ft, fu, -1.0, 1.0, 0.0, 1.0);
  if (!(den > 0.0)) {
    throw std::runtime_error(
        "reserve fraction undefined: no density mass in the observed region "
        "(t + u <= 1)");
  }
  double num = band_mass(ft, fu, 1.0, 2.0, 0.0, 1.0);
  return num / den;
}

double reserve_fraction(const DensityEstimate& ft, const DensityEstimate& fu) {
  return reserve_fraction(GridDensity::from_estimate(ft),
                          GridDensity::from_estimate(fu));
}

double region_mass(const GridDensity& ft, const GridDensity& fu,
                   const ReserveRegion& region, double total_paid) {
  constexpr double kTol = 1e-12;
  if (region.diag_lo < 1.0 - kTol || region.diag_hi > 2.0 + kTol ||
      region.u_lo < -kTol || region.u_hi > 1.0 + kTol ||
      !(region.diag_hi > region.diag_lo) || !(region.u_hi > region.u_lo)) {
    throw std::invalid_argument("region must lie inside the future triangle");
  }
  double den = band_mass(ft, fu, -1.0, 1.0, 0.0, 1.0);
  if (!(den > 0.0)) {
    throw std::runtime_error(
        "region mass undefined: no density mass in the observed region");
  }
  double raw = band_mass(ft, fu, std::max(region.diag_lo, 1.0),
                         std::min(region.diag_hi, 2.0), region.u_lo, region.u_hi);
  return total_paid * raw / den;
}

ReserveReport reserve_estimate(const ClaimDataset& dataset,
                               const DensityEstimate& ft,
                               const DensityEstimate& fu,
                               const std::string& method,
                               double period_delta) {
  if (!dataset.normalized()) {
    throw std::invalid_argument("reserve_estimate requires a normalized dataset");
  }
  std::size_t periods = period_count(period_delta);

  GridDensity gt = GridDensity::from_estimate(ft);
  GridDensity gu = GridDensity::from_estimate(fu);
  double den = band_mass(gt, gu, -1.0, 1.0, 0.0, 1.0);
  if (!(den > 0.0)) {
    throw std::runtime_error(
        "reserve fraction undefined: no density mass in the observed region "
        "(t + u <= 1)");
  }

  double total_paid = 0.0;
  for (const ClaimRecord& rec : dataset.records) total_paid += rec.z;

  ReserveReport report;
  report.total_paid = total_paid;
  report.fraction = band_mass(gt, gu, 1.0, 2.0, 0.0, 1.0) / den;
  report.reserve = report.fraction * total_paid;
  report.method = method;
  report.period_length = period_delta * dataset.unit_scale;

  double scale = total_paid / den;
  report.cashflow_future.resize(periods, 0.0);
  for (std::size_t p = 0; p < periods; ++p) {
    double dlo = 1.0 + static_cast<double>(p) * period_delta;
    double dhi = std::min(1.0 + static_cast<double>(p + 1) * period_delta, 2.0);
    report.cashflow_future[p] = scale * band_mass(gt, gu, dlo, dhi, 0.0, 1.0);
  }
  report.cashflow_accident.resize(periods, 0.0);
  for (std::size_t a = 0; a < periods; ++a) {
    double ulo = static_cast<double>(a) * period_delta;
    double uhi = std::min(static_cast<double>(a + 1) * period_delta, 1.0);
    report.cashflow_accident[a] = scale * band_mass(gt, gu, 1.0, 2.0, ulo, uhi);
  }
  return report;
}

ReserveReport reserve_report_from_forecast(const ChainLadderResult& forecast,
                                           double period_delta,
                                           double unit_scale) {
  std::size_t periods = period_count(period_delta);
  std::size_t m = forecast.completed.size();
  if (m == 0) throw std::invalid_argument("empty chain-ladder forecast");
  double w = 1.0 / static_cast<double>(m);

  double total_paid = 0.0;
  for (std::size_t r = 0; r < m; ++r) total_paid += forecast.completed[r][m - 1 - r];

  ReserveReport report;
  report.total_paid = total_paid;
  report.reserve = forecast.reserve;
  report.fraction = total_paid > 0.0 ? forecast.reserve / total_paid : 0.0;
  report.method = "CL";
  report.period_length = period_delta * unit_scale;

  // Future diagonal k spans calendar fraction ((k-1)w, kw] past valuation;
  // assign it to the cash-flow period containing its midpoint.
  report.cashflow_future.resize(periods, 0.0);
  for (std::size_t k = 1; k < m; ++k) {
    double mid = (static_cast<double>(k) - 0.5) * w;
    std::size_t p = std::min(periods - 1,
                             static_cast<std::size_t>(mid / period_delta));
    report.cashflow_future[p] += forecast.cashflow_by_diagonal[k - 1];
  }
  // Accident bin r spans [rw, (r+1)w); assign by midpoint likewise.
  report.cashflow_accident.resize(periods, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    double mid = (static_cast<double>(r) + 0.5) * w;
    std::size_t a = std::min(periods - 1,
                             static_cast<std::size_t>(mid / period_delta));
    report.cashflow_accident[a] += forecast.reserve_by_row[r];
  }
  return report;
}

}  // namespace ccl
