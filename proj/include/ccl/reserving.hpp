#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ccl/claims.hpp"
#include "ccl/density.hpp"
#include "ccl/triangle.hpp"

namespace ccl {

// Nonnegative piecewise-linear density on the uniform grid {g/(G-1)} over
// [0,1].  Node values are clipped at zero on construction; the cumulative is
// the exact integral of the linear interpolant (piecewise quadratic).
class GridDensity {
 public:
  static GridDensity from_values(std::vector<double> node_values);
  // Requires a natural-orientation estimate; undefined nodes contribute zero.
  static GridDensity from_estimate(const DensityEstimate& estimate);

  std::size_t grid_size() const { return values_.size(); }
  double node(std::size_t g) const {
    return static_cast<double>(g) / static_cast<double>(values_.size() - 1);
  }
  double value_at_node(std::size_t g) const { return values_[g]; }

  // Linear interpolant; zero outside [0,1].
  double operator()(double t) const;
  // Exact integral of the interpolant over [0, min(max(t,0),1)].
  double cumulative(double t) const;
  double total_mass() const { return cum_.back(); }

 private:
  GridDensity(std::vector<double> values);

  std::vector<double> values_;  // clipped >= 0
  std::vector<double> cum_;     // cum_[g] = integral over [0, node(g)]
  double dx_ = 0.0;
};

// Raw product-density mass of the diagonal band
//   {(t,u) in [0,1]^2 : diag_lo < t+u <= diag_hi, u_lo <= u <= u_hi}.
// Exact for the piecewise-linear interpolants: the outer integrand is a
// piecewise cubic, integrated with a 3-point Gauss rule between breakpoints.
double band_mass(const GridDensity& ft, const GridDensity& fu, double diag_lo,
                 double diag_hi, double u_lo, double u_hi);

// Outstanding fraction: mass of {t+u > 1} over mass of {t+u <= 1}.
// Throws std::runtime_error when the observed-region mass is <= 0.
double reserve_fraction(const GridDensity& ft, const GridDensity& fu);
double reserve_fraction(const DensityEstimate& ft, const DensityEstimate& fu);

// Rectangle in (accident time u) x (calendar diagonal t+u) coordinates.
struct ReserveRegion {
  double u_lo = 0.0;
  double u_hi = 1.0;
  double diag_lo = 1.0;  // band is (diag_lo, diag_hi]
  double diag_hi = 2.0;
};

// Currency mass of one future-triangle region:
//   total_paid * band(region) / band(t+u <= 1).
// The region must lie inside the future triangle (diagonals within [1,2],
// accident band within [0,1]); regions partitioning the future triangle have
// masses summing to the reserve total.
double region_mass(const GridDensity& ft, const GridDensity& fu,
                   const ReserveRegion& region, double total_paid);

struct ReserveReport {
  double total_paid = 0.0;  // sum of observed payments, original units
  double fraction = 0.0;    // outstanding over observed mass ratio
  double reserve = 0.0;     // fraction * total_paid
  // Entry p: payments falling in the p-th period after the valuation date.
  std::vector<double> cashflow_future;
  // Entry a: outstanding amount attributed to accidents in period a
  // (periods count forward from the start of the observation window).
  std::vector<double> cashflow_accident;
  std::string method;           // "LC" | "LL" | "CL"
  double period_length = 0.0;   // period length in original time units
};

// Density-based report.  `period_delta` is the cash-flow period length as a
// fraction of the observation window (in (0, 1]); the number of periods is
// ceil(1/period_delta).  The dataset must be normalized; its unit_scale
// converts the period length back to original units.
ReserveReport reserve_estimate(const ClaimDataset& dataset,
                               const DensityEstimate& ft,
                               const DensityEstimate& fu,
                               const std::string& method,
                               double period_delta);

// Aggregated-triangle report.  Future diagonals are regrouped into periods of
// length `period_delta` (fraction of the window); diagonal k spans calendar
// fraction ((k-1)/m, k/m] past the valuation date and is assigned by its
// midpoint.  `unit_scale` converts the period length to original units.
ReserveReport reserve_report_from_forecast(const ChainLadderResult& forecast,
                                           double period_delta,
                                           double unit_scale);

}  // namespace ccl
