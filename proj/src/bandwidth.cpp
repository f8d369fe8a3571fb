#include "ccl/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "ccl/quadrature.hpp"

namespace ccl {

namespace {

// Above this size the CV integral term switches from the exact
// breakpoint-split quadrature to a fixed uniform composite rule.
constexpr std::size_t kExactCvQuadratureMaxN = 2048;

void check_h(double h) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::invalid_argument("bandwidth: h must be positive and finite");
}

}  // namespace

BandwidthSpec BandwidthSpec::fixed_h(double h) {
  check_h(h);
  BandwidthSpec spec;
  spec.mode = BandwidthMode::fixed;
  spec.h = h;
  return spec;
}

BandwidthSpec BandwidthSpec::piecewise(std::vector<BandwidthPiece> pieces) {
  if (pieces.empty()) throw std::invalid_argument("BandwidthSpec: empty piecewise list");
  std::sort(pieces.begin(), pieces.end(),
            [](const BandwidthPiece& a, const BandwidthPiece& b) { return a.from < b.from; });
  if (pieces.front().from != 0.0 || pieces.back().to != 1.0)
    throw std::invalid_argument("BandwidthSpec: piecewise intervals must cover [0, 1]");
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    check_h(pieces[k].h);
    if (!(pieces[k].from < pieces[k].to))
      throw std::invalid_argument("BandwidthSpec: empty piecewise interval");
    if (k > 0 && pieces[k].from != pieces[k - 1].to)
      throw std::invalid_argument("BandwidthSpec: piecewise intervals must be contiguous");
  }
  BandwidthSpec spec;
  spec.mode = BandwidthMode::piecewise;
  spec.pieces = std::move(pieces);
  return spec;
}

BandwidthSpec BandwidthSpec::cross_validated(std::vector<double> candidates) {
  for (double h : candidates) check_h(h);
  BandwidthSpec spec;
  spec.mode = BandwidthMode::cv;
  spec.candidates = std::move(candidates);
  return spec;
}

std::string BandwidthSpec::describe() const {
  std::ostringstream os;
  switch (mode) {
    case BandwidthMode::fixed:
      os << "fixed h=" << h;
      break;
    case BandwidthMode::piecewise:
      os << "piecewise";
      for (const BandwidthPiece& p : pieces)
        os << " [" << p.from << "," << p.to << ")->" << p.h;
      break;
    case BandwidthMode::cv:
      os << "cv";
      if (selected > 0.0) os << " selected h=" << selected;
      break;
  }
  return os.str();
}

double resolve_bandwidth(const BandwidthSpec& spec, double t) {
  if (!(t >= 0.0) || !(t <= 1.0))
    throw std::invalid_argument("resolve_bandwidth: t must lie in [0, 1]");
  switch (spec.mode) {
    case BandwidthMode::fixed:
      check_h(spec.h);
      return spec.h;
    case BandwidthMode::cv:
      if (!(spec.selected > 0.0))
        throw std::logic_error("resolve_bandwidth: cv bandwidth not selected yet");
      return spec.selected;
    case BandwidthMode::piecewise: {
      // Boundary points belong to the right interval (half-open pieces).
      for (std::size_t k = spec.pieces.size(); k-- > 0;)
        if (t >= spec.pieces[k].from) return spec.pieces[k].h;
      throw std::invalid_argument("resolve_bandwidth: t not covered by piecewise intervals");
    }
  }
  throw std::logic_error("resolve_bandwidth: invalid mode");
}

std::vector<double> default_candidate_grid(std::size_t n) {
  if (n == 0) throw std::invalid_argument("default_candidate_grid: empty dataset");
  const double hi = 0.5;
  double lo = 2.0 / std::pow(static_cast<double>(n), 0.8);
  lo = std::min(lo, hi * 0.5);
  const std::size_t count = 30;
  std::vector<double> grid(count);
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k)
    grid[k] = lo * std::exp(step * static_cast<double>(k));
  grid.back() = hi;
  return grid;
}

namespace {

double cv_score_engine(const DensityEngine& engine, double h, int degree) {
  const ClaimDataset& ds = engine.dataset();
  const std::size_t n = ds.size();

  // Leave-one-out sum: -2 sum_i fhat_[i](T_i^R) S(T_i^R-) z_i.  Terms are
  // accumulated in a canonical order so the score is bitwise independent of
  // the input record order.
  std::vector<std::tuple<double, double, double, double>> terms;
  terms.reserve(n);
  std::size_t defined = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = ds.horizon - ds.records[i].t;
    const DensityEngine::Value v = engine.at(ti, h, degree, static_cast<std::ptrdiff_t>(i));
    if (v.defined) ++defined;
    terms.emplace_back(ti, ds.records[i].u, ds.records[i].z,
                       v.value * engine.payment_weights()[i]);
  }
  if (defined == 0) return std::numeric_limits<double>::infinity();
  std::sort(terms.begin(), terms.end());
  double loo_term = 0.0;
  for (const auto& term : terms) loo_term += std::get<3>(term);

  // Integral term: integral of fhat(t)^2 W(t) dt over [0, 1].
  auto integrand = [&engine, h, degree](double t) {
    const DensityEngine::Value v = engine.at(t, h, degree);
    const double w = engine.weighted_exposure_at(t);
    return v.value * v.value * w;
  };
  double integral = 0.0;
  if (n <= kExactCvQuadratureMaxN) {
    // The integrand is piecewise smooth between exposure events and kernel
    // window edges; split there and use a high-order panel on each piece.
    std::vector<double> pts;
    pts.reserve(6 * n);
    for (double x : engine.sorted_starts()) {
      pts.push_back(x);
      pts.push_back(x - h);
      pts.push_back(x + h);
    }
    for (double x : engine.sorted_stops()) {
      pts.push_back(x);
      pts.push_back(x - h);
      pts.push_back(x + h);
    }
    integral = integrate_piecewise_gl(integrand, clipped_breakpoints(std::move(pts), 0.0, 1.0), 12);
  } else {
    std::vector<double> pts(4097);
    for (std::size_t k = 0; k < pts.size(); ++k)
      pts[k] = static_cast<double>(k) / static_cast<double>(pts.size() - 1);
    integral = integrate_piecewise_gl(integrand, pts, 4);
  }
  return integral - 2.0 * loo_term;
}

}  // namespace

double cv_score(const ClaimDataset& ds, const SurvivalEstimate& surv, double h, int degree,
                Kernel kernel) {
  check_h(h);
  if (h > 1.0) throw std::invalid_argument("cv_score: h must lie in (0, 1]");
  if (degree != 0 && degree != 1) throw std::invalid_argument("cv_score: degree must be 0 or 1");
  DensityEngine engine(ds, surv, kernel);
  return cv_score_engine(engine, h, degree);
}

DensityEngine::Value loo_estimate(const ClaimDataset& ds, const SurvivalEstimate& surv,
                                  std::size_t exclude, double h, int degree, double t,
                                  Kernel kernel) {
  if (exclude >= ds.size()) throw std::invalid_argument("loo_estimate: index out of range");
  DensityEngine engine(ds, surv, kernel);
  return engine.at(t, h, degree, static_cast<std::ptrdiff_t>(exclude));
}

CvResult select_bandwidth(const ClaimDataset& ds, const SurvivalEstimate& surv,
                          const std::vector<double>& candidates, int degree, Kernel kernel) {
  if (candidates.empty()) throw std::invalid_argument("select_bandwidth: empty candidate grid");
  DensityEngine engine(ds, surv, kernel);
  CvResult out;
  out.table.reserve(candidates.size());
  std::vector<double> sorted = candidates;
  std::sort(sorted.begin(), sorted.end());
  double best = std::numeric_limits<double>::infinity();
  double best_h = -1.0;
  for (double h : sorted) {
    check_h(h);
    const double score = cv_score_engine(engine, h, degree);
    out.table.push_back(CvEntry{h, score});
    if (score <= best) {  // <=: ties resolve toward the larger bandwidth
      best = score;
      best_h = h;
    }
  }
  if (!(best < std::numeric_limits<double>::infinity()))
    throw std::runtime_error("select_bandwidth: every candidate was rejected (+inf score)");
  out.selected = best_h;
  return out;
}

CostDensityResult estimate_cost_density(const ClaimDataset& ds, DensityTarget target, int degree,
                                        const BandwidthSpec& spec, std::size_t grid_size,
                                        Kernel kernel) {
  if (grid_size < 2) throw std::invalid_argument("estimate_cost_density: grid_size < 2");
  if (degree != 0 && degree != 1)
    throw std::invalid_argument("estimate_cost_density: degree must be 0 or 1");
  const ClaimDataset work = target == DensityTarget::delay ? ds : swap_time_roles(ds);
  const SurvivalEstimate surv = km_weighted(work);
  DensityEngine engine(work, surv, kernel);

  CostDensityResult out;
  out.spec = spec;
  if (spec.mode == BandwidthMode::cv) {
    const std::vector<double> grid =
        spec.candidates.empty() ? default_candidate_grid(work.size()) : spec.candidates;
    out.cv = select_bandwidth(work, surv, grid, degree, kernel);
    out.spec.selected = out.cv.selected;
  }

  out.density.degree = degree;
  out.density.orientation = TimeOrientation::natural;
  out.density.values.resize(grid_size);
  out.density.flags.assign(grid_size, 0);
  for (std::size_t g = 0; g < grid_size; ++g) {
    const double tn = static_cast<double>(g) / static_cast<double>(grid_size - 1);
    const double h = resolve_bandwidth(out.spec, tn);
    const DensityEngine::Value v = engine.at(1.0 - tn, h, degree);
    out.density.values[g] = v.value;
    out.density.flags[g] = v.defined ? 0 : 1;
  }
  return out;
}

}  // namespace ccl
