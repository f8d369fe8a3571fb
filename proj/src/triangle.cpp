#include "ccl/triangle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ccl {

namespace {

std::size_t bin_index(double value, std::size_t m) {
  const auto b = static_cast<long long>(std::floor(value * static_cast<double>(m)));
  if (b < 0) return 0;
  return std::min<std::size_t>(static_cast<std::size_t>(b), m - 1);
}

}  // namespace

HistogramHazard histogram_hazard(const ClaimDataset& ds, std::size_t m) {
  if (m < 1) throw std::invalid_argument("histogram_hazard: m must be at least 1");
  if (!ds.normalized())
    throw std::invalid_argument("histogram_hazard: dataset must be normalized (horizon 1)");
  validate(ds);
  HistogramHazard out;
  out.bin_width = ds.horizon / static_cast<double>(m);
  out.values.assign(m, 0.0);
  out.flags.assign(m, 0);

  std::vector<double> numer(m, 0.0);
  for (std::size_t i = 0; i < ds.size(); ++i)
    numer[bin_index(ds.horizon - ds.records[i].t, m)] += ds.records[i].z;

  ExposureProcess exposure(ds);
  for (std::size_t l = 0; l < m; ++l) {
    const double lo = static_cast<double>(l) / static_cast<double>(m);
    const double hi = static_cast<double>(l + 1) / static_cast<double>(m);
    const double denom = exposure.integral(lo, hi, /*use_weights=*/true);
    if (numer[l] > 0.0) {
      if (!(denom > 0.0))
        throw std::runtime_error(
            "histogram_hazard: positive payment mass with zero exposure in bin " +
            std::to_string(l));
      out.values[l] = numer[l] / denom;
    } else {
      out.values[l] = 0.0;
      out.flags[l] = 1;
    }
  }
  return out;
}

std::vector<double> development_factors(const HistogramHazard& hist) {
  std::vector<double> out(hist.values.size());
  for (std::size_t l = 0; l < out.size(); ++l)
    out[l] = 1.0 + hist.values[l] * hist.bin_width;
  return out;
}

BinnedTriangle aggregate_triangle(const ClaimDataset& ds, std::size_t m, bool amounts) {
  if (m < 2) throw std::invalid_argument("aggregate_triangle: m must be at least 2");
  if (!ds.normalized())
    throw std::invalid_argument("aggregate_triangle: dataset must be normalized (horizon 1)");
  validate(ds);
  BinnedTriangle tri;
  tri.m = m;
  tri.amounts = amounts;
  tri.cells.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const std::size_t r = bin_index(ds.records[i].u, m);
    const std::size_t s = bin_index(ds.records[i].t, m);
    if (r + s > m - 1)
      throw std::invalid_argument("aggregate_triangle: record " + std::to_string(i) +
                                  " falls beyond the observable region (bins " +
                                  std::to_string(r) + ", " + std::to_string(s) + ")");
    tri.cells[r][s] += amounts ? ds.records[i].z : 1.0;
  }
  return tri;
}

ChainLadderResult chain_ladder_forecast(const BinnedTriangle& tri) {
  const std::size_t m = tri.m;
  if (m < 2) throw std::invalid_argument("chain_ladder_forecast: triangle needs m >= 2");
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t s = 0; s + r <= m - 1; ++s)
      if (tri.cells[r][s] < 0.0)
        throw std::invalid_argument("chain_ladder_forecast: negative cell");

  ChainLadderResult out;
  out.completed.assign(m, std::vector<double>(m, 0.0));
  // Observed cumulative rows up to each row's latest diagonal m-1-r.
  for (std::size_t r = 0; r < m; ++r) {
    double acc = 0.0;
    for (std::size_t s = 0; s + r <= m - 1; ++s) {
      acc += tri.cells[r][s];
      out.completed[r][s] = acc;
    }
  }

  out.factors.assign(m - 1, 1.0);
  for (std::size_t s = 0; s + 1 <= m - 1; ++s) {
    double num = 0.0, den = 0.0;
    for (std::size_t r = 0; r + s + 1 <= m - 1; ++r) {
      num += out.completed[r][s + 1];
      den += out.completed[r][s];
    }
    if (!(den > 0.0))
      throw chain_ladder_breakdown(
          "chain ladder breakdown: zero pooled denominator for factor s = " + std::to_string(s));
    out.factors[s] = num / den;
  }

  out.reserve_by_row.assign(m, 0.0);
  out.cashflow_by_diagonal.assign(m - 1, 0.0);
  for (std::size_t r = 1; r < m; ++r) {
    const std::size_t last = m - 1 - r;
    for (std::size_t s = last; s + 1 <= m - 1; ++s) {
      out.completed[r][s + 1] = out.completed[r][s] * out.factors[s];
      const double increment = out.completed[r][s + 1] - out.completed[r][s];
      out.reserve_by_row[r] += increment;
      out.cashflow_by_diagonal[r + s - (m - 1)] += increment;
    }
    out.reserve += out.reserve_by_row[r];
  }
  return out;
}

std::vector<RowFactor> row_dev_factors(const BinnedTriangle& tri, std::size_t s) {
  const std::size_t m = tri.m;
  if (s + 1 > m - 1)
    throw std::invalid_argument("row_dev_factors: development index out of range");
  std::vector<RowFactor> out;
  for (std::size_t r = 0; r + s + 1 <= m - 1; ++r) {
    double through_s = 0.0;
    for (std::size_t l = 0; l <= s; ++l) through_s += tri.cells[r][l];
    if (!(through_s > 0.0)) continue;  // omitted: zero denominator
    const double through_s1 = through_s + tri.cells[r][s + 1];
    out.push_back(RowFactor{r, through_s1 / through_s});
  }
  return out;
}

}  // namespace ccl
