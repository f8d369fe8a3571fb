#pragma once

#include <cstddef>
#include <vector>

#include "ccl/claims.hpp"
#include "ccl/kernels.hpp"
#include "ccl/survival.hpp"

namespace ccl {

enum class TimeOrientation { reversed, natural };

//! Kernel density estimate sampled on the uniform grid g/(G-1), g = 0..G-1,
//! over [0, 1].  Values at points where the estimator is undefined (zero or
//! singular denominator) are 0 and carry a nonzero flag.
struct DensityEstimate {
  std::vector<double> values;
  std::vector<char> flags;
  TimeOrientation orientation = TimeOrientation::reversed;
  int degree = 0;  //! 0 = local constant, 1 = local linear

  std::size_t grid_size() const { return values.size(); }
  double grid_point(std::size_t g) const {
    return static_cast<double>(g) / static_cast<double>(values.size() - 1);
  }
};

//! Shared machinery for cost-weighted kernel estimators in reversed time.
//!
//! Numerators are kernel sums over reversed payment times weighted by
//! S(T_i^R-) z_i; denominators are kernel-weighted integrals of the weighted
//! exposure, evaluated exactly: for the polynomial Epanechnikov kernel every
//! record contributes a closed-form partial moment over [u_i, T_i^R].  Wide
//! bandwidths use power prefix sums over the sorted event times (O(log n) per
//! point); narrow bandwidths switch to windowed direct sums, which avoids the
//! cancellation that polynomial expansion in (x - t)/h suffers when h is
//! small.
class DensityEngine {
 public:
  DensityEngine(const ClaimDataset& ds, const SurvivalEstimate& surv,
                Kernel kernel = Kernel::epanechnikov());

  struct Value {
    double value = 0.0;
    bool defined = false;
  };

  //! G_j(t) = sum_i K_h(t - T_i^R) (t - T_i^R)^j S(T_i^R-) z_i, j in {0, 1}.
  //! skip >= 0 removes that record (leave-one-out).
  double numerator_moment(double t, double h, int j, std::ptrdiff_t skip = -1) const;

  //! a_j(t) = integral K_h(t - s) (t - s)^j W(s) ds, j in {0, 1, 2};
  //! for skip >= 0 the record's own exposure interval is removed from W.
  double exposure_moment(double t, double h, int j, std::ptrdiff_t skip = -1) const;

  //! Local constant estimator G_0 / a_0; undefined when a_0 <= 0.
  Value local_constant_at(double t, double h, std::ptrdiff_t skip = -1) const;

  //! Local linear estimator (a_2 G_0 - a_1 G_1) / (a_0 a_2 - a_1^2);
  //! undefined when the denominator is singular (<= 1e-12 relative).
  Value local_linear_at(double t, double h, std::ptrdiff_t skip = -1) const;

  Value at(double t, double h, int degree, std::ptrdiff_t skip = -1) const {
    return degree == 0 ? local_constant_at(t, h, skip) : local_linear_at(t, h, skip);
  }

  //! Weighted exposure W(s) (left-continuous in s).
  double weighted_exposure_at(double s) const;

  const ClaimDataset& dataset() const { return *ds_; }
  const Kernel& kernel() const { return kernel_; }
  //! S(T_i^R-) z_i per record, in dataset order.
  const std::vector<double>& payment_weights() const { return rec_zt_; }
  const std::vector<double>& sorted_starts() const { return su_; }
  const std::vector<double>& sorted_stops() const { return st_; }

 private:
  double endpoint_moment_sum(bool stops, double t, double h, int j) const;
  double endpoint_moment_sum_direct(bool stops, double t, double h, int j) const;
  //! Exact predicate: some unskipped record with z > 0 has exposure of
  //! positive measure inside (t - h, t + h).  Used to separate true zero
  //! denominators from cancellation residue when a_0 is at roundoff scale.
  bool window_has_mass(double t, double h, std::ptrdiff_t skip) const;

  const ClaimDataset* ds_;
  Kernel kernel_;
  // payments sorted by reversed time with survival-weighted mass
  std::vector<double> pay_t_, pay_w_;
  std::vector<std::vector<double>> pay_pw_;  // prefix sums of pay_w * pay_t^d, d = 0..3
  // exposure interval endpoints, each sorted, with z prefix power sums d = 0..5
  std::vector<double> su_, su_z_, st_, st_z_;
  std::vector<std::vector<double>> su_pw_, st_pw_;
  // per-record values in dataset order (for leave-one-out adjustments)
  std::vector<double> rec_u_, rec_stop_, rec_z_, rec_zt_;
};

//! Local constant cost-weighted density estimate in reversed time on a
//! uniform grid of grid_size points.
DensityEstimate local_constant(const ClaimDataset& ds, const SurvivalEstimate& surv, double h,
                               std::size_t grid_size, Kernel kernel = Kernel::epanechnikov());

//! Local linear counterpart of local_constant.
DensityEstimate local_linear(const ClaimDataset& ds, const SurvivalEstimate& surv, double h,
                             std::size_t grid_size, Kernel kernel = Kernel::epanechnikov());

//! Exposure moment a_j(t); j outside {0, 1, 2} is an error.
double aj_moment(const ClaimDataset& ds, const SurvivalEstimate& surv, double t, double h, int j,
                 Kernel kernel = Kernel::epanechnikov());

//! Numerator moment G_j(t); j outside {0, 1} is an error.
double g_moment(const ClaimDataset& ds, const SurvivalEstimate& surv, double t, double h, int j,
                Kernel kernel = Kernel::epanechnikov());

//! Mirror a density estimate between reversed and natural time t <-> 1 - t.
DensityEstimate reverse_density(const DensityEstimate& d);

//! Swap the roles of accident time and delay (u' = t, t' = u).
ClaimDataset swap_time_roles(const ClaimDataset& ds);

//! Natural-time estimate of the cost-weighted accident-time density: the full
//! reversed-time machinery applied to the role-swapped dataset, then mirrored
//! back to natural time.
DensityEstimate estimate_for_U(const ClaimDataset& ds, int degree, double h,
                               std::size_t grid_size, Kernel kernel = Kernel::epanechnikov());

}  // namespace ccl
