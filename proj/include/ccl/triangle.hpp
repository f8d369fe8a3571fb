#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ccl/claims.hpp"

namespace ccl {

//! Histogram estimator of the cost-weighted reversed-time hazard on m
//! equal-width bins of [0, horizon].
struct HistogramHazard {
  std::vector<double> values;  //! hazard rate per bin, l = 0..m-1
  std::vector<char> flags;     //! nonzero where the bin had no payment mass
  double bin_width = 0.0;      //! horizon / m

  std::size_t bins() const { return values.size(); }
};

//! values[l] = (sum of z with T^R in bin l) / integral of weighted exposure
//! over bin l.  The denominator is exact (event sweep, no quadrature).
//! Empty bins (zero numerator) give 0 with a flag.
HistogramHazard histogram_hazard(const ClaimDataset& ds, std::size_t m);

//! Development factors implied by the histogram hazard: 1 plus the hazard
//! mass per bin (rate times bin width, i.e. the hazard with time measured in
//! bin units).  With that time scale these match classical chain-ladder
//! factors on aligned bins up to lower-order terms.
std::vector<double> development_factors(const HistogramHazard& hist);

//! Incremental run-off triangle: cells[r][s] aggregates claims with accident
//! time in bin r and delay in bin s; observable cells satisfy r + s <= m - 1.
struct BinnedTriangle {
  std::size_t m = 0;
  bool amounts = true;  //! false: claim counts
  std::vector<std::vector<double>> cells;

  double cell(std::size_t r, std::size_t s) const { return cells[r][s]; }
};

//! Aggregate a normalized dataset into an m x m triangle by floor(value * m)
//! with the right edge clamped into the last bin.  A record landing beyond
//! the observable region (r + s > m - 1) is a hard error.
BinnedTriangle aggregate_triangle(const ClaimDataset& ds, std::size_t m, bool amounts);

//! Thrown when a pooled development factor has a zero denominator: the
//! chain-ladder algorithm breaks down on such triangles.
class chain_ladder_breakdown : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ChainLadderResult {
  std::vector<double> factors;                  //! pooled F_s, s = 0..m-2
  std::vector<std::vector<double>> completed;   //! cumulative rectangle, m x m
  double reserve = 0.0;                         //! sum of forecast increments
  std::vector<double> reserve_by_row;           //! per accident bin
  std::vector<double> cashflow_by_diagonal;     //! future increments, r+s = m-1+k, k = 1..m-1
};

//! Classical pooled chain ladder: F_s = sum_{r <= m-s-2} C[r][s+1] divided by
//! the same rows' C[r][s]; future cells filled row-wise by C[r][s+1] =
//! C[r][s] F_s.  Throws chain_ladder_breakdown on a zero pooled denominator.
ChainLadderResult chain_ladder_forecast(const BinnedTriangle& tri);

//! Per-row development factors of a counts triangle at development index s:
//! cumulative through column s+1 over cumulative through column s, for rows
//! with the (r, s+1) cell observed.  Rows with zero denominator are omitted.
struct RowFactor {
  std::size_t row = 0;
  double factor = 0.0;
};
std::vector<RowFactor> row_dev_factors(const BinnedTriangle& tri, std::size_t s);

}  // namespace ccl
