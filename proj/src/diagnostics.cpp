#include "ccl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "ccl/metrics.hpp"
#include "ccl/triangle.hpp"

namespace ccl {

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

double ise(const DensityEstimate& estimate,
           const std::function<double(double)>& reference) {
  std::size_t n = estimate.grid_size();
  if (n < 2) throw std::invalid_argument("ise needs at least two grid points");
  auto sq = [&](std::size_t g) {
    double v = estimate.flags[g] ? 0.0 : estimate.values[g];
    double d = v - reference(estimate.grid_point(g));
    return d * d;
  };
  double dx = 1.0 / static_cast<double>(n - 1);
  double total = 0.0;
  double prev = sq(0);
  for (std::size_t g = 1; g < n; ++g) {
    double cur = sq(g);
    total += 0.5 * (prev + cur) * dx;
    prev = cur;
  }
  return total;
}

double squared_relative_error(double estimate, double truth) {
  if (truth == 0.0) {
    throw std::invalid_argument("squared_relative_error requires truth != 0");
  }
  double r = (estimate - truth) / truth;
  return r * r;
}

double mse(const std::vector<double>& estimates, const std::vector<double>& truths) {
  if (estimates.size() != truths.size()) {
    throw std::invalid_argument("mse requires equal-length vectors");
  }
  if (estimates.empty()) throw std::invalid_argument("mse of empty vectors");
  double total = 0.0;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    double d = estimates[i] - truths[i];
    total += d * d;
  }
  return total / static_cast<double>(estimates.size());
}

SampleStats sample_stats(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("sample_stats of empty sample");
  SampleStats st;
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  st.median = n % 2 == 1 ? values[n / 2]
                         : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  double sum = 0.0;
  for (double v : values) sum += v;
  st.mean = sum / static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - st.mean) * (v - st.mean);
    st.sd = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return st;
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

DiagnosticsReport independence_diagnostic(const ClaimDataset& ds,
                                          std::size_t bins, std::size_t s_lo,
                                          std::size_t s_hi) {
  if (bins < 2) throw std::invalid_argument("need at least 2 accident bins");
  if (s_hi >= bins - 1 || s_lo > s_hi) {
    throw std::invalid_argument("development index range outside 0..bins-2");
  }
  BinnedTriangle tri = aggregate_triangle(ds, bins, /*amounts=*/false);

  DiagnosticsReport report;
  for (std::size_t s = s_lo; s <= s_hi; ++s) {
    std::vector<RowFactor> factors = row_dev_factors(tri, s);
    std::size_t k = factors.size();
    if (k < 3) {
      throw std::runtime_error("fewer than 3 usable rows at development index " +
                               std::to_string(s));
    }
    double rbar = 0.0, fbar = 0.0;
    for (const RowFactor& rf : factors) {
      rbar += static_cast<double>(rf.row);
      fbar += rf.factor;
    }
    rbar /= static_cast<double>(k);
    fbar /= static_cast<double>(k);
    double sxx = 0.0, sxy = 0.0;
    for (const RowFactor& rf : factors) {
      double dr = static_cast<double>(rf.row) - rbar;
      sxx += dr * dr;
      sxy += dr * (rf.factor - fbar);
    }
    IndependenceRow row;
    row.s = s;
    row.rows_used = k;
    row.slope = sxy / sxx;
    row.intercept = fbar - row.slope * rbar;
    double rss = 0.0;
    for (const RowFactor& rf : factors) {
      double resid = rf.factor - (row.intercept + row.slope * static_cast<double>(rf.row));
      rss += resid * resid;
    }
    double dof = static_cast<double>(k - 2);
    double se2 = rss / dof / sxx;
    if (se2 <= 0.0 || !std::isfinite(se2)) {
      // Noise-free fit: slope exactly zero is fully consistent with H0,
      // any other exact-linear trend rejects it outright.
      row.t_stat = row.slope == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
      row.p_value = row.slope == 0.0 ? 1.0 : 0.0;
    } else {
      row.t_stat = row.slope / std::sqrt(se2);
      boost::math::students_t dist(dof);
      row.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(row.t_stat)));
    }
    report.independence.push_back(row);
  }
  return report;
}

DiagnosticsReport multiplicativity_diagnostic(const ClaimDataset& ds,
                                              std::size_t bins,
                                              std::size_t grid_size) {
  if (!ds.normalized()) {
    throw std::invalid_argument("multiplicativity diagnostic requires a normalized dataset");
  }
  if (bins < 1) throw std::invalid_argument("need at least one accident bin");
  if (grid_size < 2) throw std::invalid_argument("grid_size must be >= 2");

  std::vector<std::vector<std::pair<double, double>>> grouped(bins);
  for (const ClaimRecord& rec : ds.records) {
    std::size_t q = std::min(static_cast<std::size_t>(rec.u * static_cast<double>(bins)),
                             bins - 1);
    grouped[q].push_back({rec.t, rec.z});
  }

  DiagnosticsReport report;
  for (std::size_t q = 0; q < bins; ++q) {
    QuarterCurve curve;
    curve.quarter = q;
    auto& pts = grouped[q];
    std::sort(pts.begin(), pts.end());

    // Average duplicate delays so the interpolant is a function of t.
    for (std::size_t i = 0; i < pts.size();) {
      std::size_t j = i;
      double zsum = 0.0;
      while (j < pts.size() && pts[j].first == pts[i].first) {
        zsum += pts[j].second;
        ++j;
      }
      curve.t.push_back(pts[i].first);
      curve.z.push_back(zsum / static_cast<double>(j - i));
      i = j;
    }
    double total = 0.0;
    for (const auto& p : pts) total += p.second;
    curve.c = pts.empty() ? 0.0 : total / static_cast<double>(pts.size());
    curve.degenerate = curve.t.size() < 2 || curve.c <= 0.0;

    if (!curve.degenerate) {
      curve.grid_values.resize(grid_size);
      for (std::size_t g = 0; g < grid_size; ++g) {
        double x = static_cast<double>(g) / static_cast<double>(grid_size - 1);
        double y;
        if (x <= curve.t.front()) {
          y = curve.z.front();
        } else if (x >= curve.t.back()) {
          y = curve.z.back();
        } else {
          auto it = std::upper_bound(curve.t.begin(), curve.t.end(), x);
          std::size_t hi = static_cast<std::size_t>(it - curve.t.begin());
          double t0 = curve.t[hi - 1], t1 = curve.t[hi];
          double w = (x - t0) / (t1 - t0);
          y = curve.z[hi - 1] * (1.0 - w) + curve.z[hi] * w;
        }
        curve.grid_values[g] = y / curve.c;
      }
    }
    report.quarters.push_back(std::move(curve));
  }

  for (std::size_t a = 0; a < bins; ++a) {
    if (report.quarters[a].degenerate) continue;
    for (std::size_t b = a + 1; b < bins; ++b) {
      if (report.quarters[b].degenerate) continue;
      double sup = 0.0;
      for (std::size_t g = 0; g < grid_size; ++g) {
        sup = std::max(sup, std::abs(report.quarters[a].grid_values[g] -
                                     report.quarters[b].grid_values[g]));
      }
      report.max_sup_distance = std::max(report.max_sup_distance, sup);
    }
  }
  return report;
}

}  // namespace ccl
