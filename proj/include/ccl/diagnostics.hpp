#pragma once

#include <cstddef>
#include <vector>

#include "ccl/claims.hpp"

namespace ccl {

// Slope test of per-row development factors against the accident index, for
// one development index s.  Under independence of accident time and delay
// the factors have no trend in the accident index.
struct IndependenceRow {
  std::size_t s = 0;          // development index tested
  std::size_t rows_used = 0;  // rows with a usable factor
  double slope = 0.0;         // OLS slope of factor on row index
  double intercept = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;       // two-sided, H0: slope = 0
};

// Per accident-period curve of costs against delay, normalized by the
// period's mean cost; under a multiplicative cost structure the normalized
// curves agree across periods up to noise.
struct QuarterCurve {
  std::size_t quarter = 0;
  std::vector<double> t;            // sorted delays (duplicates averaged)
  std::vector<double> z;            // matching mean costs
  double c = 0.0;                   // mean cost in the period
  std::vector<double> grid_values;  // normalized interpolant on the common grid
  bool degenerate = false;          // empty or single-point period
};

struct DiagnosticsReport {
  std::vector<IndependenceRow> independence;
  std::vector<QuarterCurve> quarters;
  // Largest sup-distance between normalized interpolants of two
  // non-degenerate periods (0 when fewer than two).
  double max_sup_distance = 0.0;
};

// Aggregates the dataset into a `bins` x `bins` counts triangle and, for each
// development index s in [s_lo, s_hi], regresses the per-row development
// factors on the row index; two-sided t-test p-value for zero slope.
// Throws when a requested s has fewer than 3 usable rows.
DiagnosticsReport independence_diagnostic(const ClaimDataset& ds,
                                          std::size_t bins, std::size_t s_lo,
                                          std::size_t s_hi);

// Splits records into `bins` accident periods and builds the normalized
// cost-versus-delay interpolants on a common grid of `grid_size` points.
DiagnosticsReport multiplicativity_diagnostic(const ClaimDataset& ds,
                                              std::size_t bins,
                                              std::size_t grid_size = 101);

}  // namespace ccl
