#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ccl/claims.hpp"
#include "ccl/density.hpp"
#include "ccl/kernels.hpp"
#include "ccl/survival.hpp"

namespace ccl {

enum class BandwidthMode { fixed, piecewise, cv };

struct BandwidthPiece {
  double from = 0.0;  //! inclusive
  double to = 1.0;    //! exclusive except for the last piece
  double h = 0.0;
};

//! How to pick the smoothing bandwidth for one target (delay or accident
//! time).  Piecewise intervals are expressed in natural time on [0, 1] and
//! must partition it.  In cv mode `selected` is filled by select_bandwidth.
struct BandwidthSpec {
  BandwidthMode mode = BandwidthMode::fixed;
  double h = 0.0;
  std::vector<BandwidthPiece> pieces;
  std::vector<double> candidates;  //! empty: default grid
  double selected = -1.0;          //! chosen h after cross-validation

  static BandwidthSpec fixed_h(double h);
  static BandwidthSpec piecewise(std::vector<BandwidthPiece> pieces);
  static BandwidthSpec cross_validated(std::vector<double> candidates = {});

  std::string describe() const;
};

//! Bandwidth governing natural-time grid point t.  Piecewise boundaries
//! belong to the right interval; cv mode requires a selected value.
double resolve_bandwidth(const BandwidthSpec& spec, double t);

//! 30 log-spaced candidates in [2/n^{4/5}, 0.5].
std::vector<double> default_candidate_grid(std::size_t n);

//! Least-squares cross-validation score for bandwidth h and estimator degree
//! p (0 local constant, 1 local linear): integral of the squared estimate
//! against the weighted exposure minus twice the leave-one-out sum.  +inf when
//! every leave-one-out denominator vanishes.
double cv_score(const ClaimDataset& ds, const SurvivalEstimate& surv, double h, int degree,
                Kernel kernel = Kernel::epanechnikov());

//! Leave-one-out estimator at reversed-time point t: record `exclude` is
//! removed from numerator and denominator sums while the full-data survival
//! weights are kept.  Undefined denominators give value 0 with defined=false.
DensityEngine::Value loo_estimate(const ClaimDataset& ds, const SurvivalEstimate& surv,
                                  std::size_t exclude, double h, int degree, double t,
                                  Kernel kernel = Kernel::epanechnikov());

struct CvEntry {
  double h = 0.0;
  double score = 0.0;
};

struct CvResult {
  double selected = 0.0;
  std::vector<CvEntry> table;
};

//! Score every candidate and pick the minimizer; ties break toward the
//! larger bandwidth.  Throws if the grid is empty or all scores are +inf.
CvResult select_bandwidth(const ClaimDataset& ds, const SurvivalEstimate& surv,
                          const std::vector<double>& candidates, int degree,
                          Kernel kernel = Kernel::epanechnikov());

//! Natural-time cost-weighted density estimate of the payment delay (target
//! T) or the accident time (target U, via role swapping), with the bandwidth
//! resolved per natural grid point.  Returns the estimate, the spec with any
//! cross-validated selection filled in, and the CV table when cv was run.
struct CostDensityResult {
  DensityEstimate density;  //! natural orientation
  BandwidthSpec spec;       //! resolved (selected filled for cv mode)
  CvResult cv;              //! empty table unless cv mode
};

enum class DensityTarget { delay, accident };

CostDensityResult estimate_cost_density(const ClaimDataset& ds, DensityTarget target, int degree,
                                        const BandwidthSpec& spec, std::size_t grid_size,
                                        Kernel kernel = Kernel::epanechnikov());

}  // namespace ccl
