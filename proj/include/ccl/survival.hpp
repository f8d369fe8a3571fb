#pragma once

#include <cstddef>
#include <vector>

#include "ccl/claims.hpp"
#include "ccl/step_function.hpp"

namespace ccl {

//! Cost-weighted cumulative hazard in reversed development time.
//!
//! Jumps sit at the distinct reversed payment times s; the jump size pools all
//! tied payments: dA(s) = sum_{T_i^R = s} z_i / W(s) with W the weighted
//! exposure.
struct CumHazardEstimate {
  std::vector<double> times;        //! distinct reversed payment times, increasing
  std::vector<double> increments;   //! dA at each time, in [0, 1]
  std::vector<double> cumulative;   //! running sum of increments

  double value(double s) const;      //! A(s), right-continuous
  StepFunction to_step_function() const;
};

//! Cost-weighted product-limit survival function in reversed development time.
//!
//! values[k] = prod_{j <= k} (1 - dA(times[j])) is stored directly so the
//! product-limit identity holds exactly at every jump.
struct SurvivalEstimate {
  std::vector<double> times;       //! distinct reversed payment times, increasing
  std::vector<double> increments;  //! hazard increments dA, in [0, 1]
  std::vector<double> values;      //! survival value after each jump

  double value(double s) const;       //! S(s), right-continuous
  double left_limit(double s) const;  //! S(s-)
  StepFunction to_step_function() const;
};

//! Cost-weighted Aalen estimator of the reversed-time cumulative hazard.
//! Requires a normalized dataset with at least one positive amount; throws if
//! a positive-mass jump has zero weighted exposure at risk.
CumHazardEstimate aalen_weighted(const ClaimDataset& ds);

//! Cost-weighted Kaplan-Meier estimator built from aalen_weighted.
SurvivalEstimate km_weighted(const ClaimDataset& ds);

//! Survival left limits S(T_i^R-) for every record, in dataset order.
std::vector<double> survival_left_limits(const ClaimDataset& ds, const SurvivalEstimate& s);

}  // namespace ccl
