#include "ccl/density.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace ccl {

namespace {

// Below this bandwidth the windowed direct path is used: expanding
// ((x - t)/h)^d in powers of x multiplies roundoff by (1/h)^d.
constexpr double kPrefixPathMinBandwidth = 0.1;

constexpr double kBinom[6][6] = {
    {1, 0, 0, 0, 0, 0}, {1, 1, 0, 0, 0, 0},  {1, 2, 1, 0, 0, 0},
    {1, 3, 3, 1, 0, 0}, {1, 4, 6, 4, 1, 0},  {1, 5, 10, 10, 5, 1},
};

// Coefficients of the partial moments C_j(y) = sum_d kCkCoef[j][d] y^d of the
// Epanechnikov kernel, valid for y in [-1, 1].
constexpr double kCkCoef[3][6] = {
    {0.5, 0.75, 0.0, -0.25, 0.0, 0.0},
    {-0.1875, 0.0, 0.375, 0.0, -0.1875, 0.0},
    {0.1, 0.0, 0.0, 0.25, 0.0, -0.15},
};
constexpr int kCkDegree[3] = {3, 4, 5};
// Full moments C_j(1).
constexpr double kCkFull[3] = {1.0, 0.0, 0.2};

void check_point(double t, double h) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::invalid_argument("density: bandwidth must be positive and finite");
  if (!std::isfinite(t)) throw std::invalid_argument("density: evaluation point must be finite");
}

std::vector<std::vector<double>> power_prefix(const std::vector<double>& x,
                                              const std::vector<double>& w, int max_d) {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(max_d) + 1);
  const std::size_t n = x.size();
  for (int d = 0; d <= max_d; ++d) out[static_cast<std::size_t>(d)].assign(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double p = 1.0;
    for (int d = 0; d <= max_d; ++d) {
      out[static_cast<std::size_t>(d)][k + 1] = out[static_cast<std::size_t>(d)][k] + w[k] * p;
      p *= x[k];
    }
  }
  return out;
}

}  // namespace

DensityEngine::DensityEngine(const ClaimDataset& ds, const SurvivalEstimate& surv, Kernel kernel)
    : ds_(&ds), kernel_(kernel) {
  if (!ds.normalized())
    throw std::invalid_argument("DensityEngine: dataset must be normalized (horizon 1)");
  const std::size_t n = ds.size();
  rec_u_.resize(n);
  rec_stop_.resize(n);
  rec_z_.resize(n);
  rec_zt_ = survival_left_limits(ds, surv);
  for (std::size_t i = 0; i < n; ++i) {
    rec_u_[i] = ds.records[i].u;
    rec_stop_[i] = ds.horizon - ds.records[i].t;
    rec_z_[i] = ds.records[i].z;
    rec_zt_[i] *= ds.records[i].z;
  }

  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;

  // Sorts below break ties on the full value tuple so that prefix sums (and
  // hence every estimate) are bitwise independent of the input record order.
  std::sort(idx.begin(), idx.end(), [this](std::size_t a, std::size_t b) {
    return std::tie(rec_stop_[a], rec_u_[a], rec_z_[a]) <
           std::tie(rec_stop_[b], rec_u_[b], rec_z_[b]);
  });
  pay_t_.resize(n);
  pay_w_.resize(n);
  st_.resize(n);
  st_z_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    pay_t_[k] = rec_stop_[idx[k]];
    pay_w_[k] = rec_zt_[idx[k]];
    st_[k] = rec_stop_[idx[k]];
    st_z_[k] = rec_z_[idx[k]];
  }
  pay_pw_ = power_prefix(pay_t_, pay_w_, 3);
  st_pw_ = power_prefix(st_, st_z_, 5);

  std::sort(idx.begin(), idx.end(), [this](std::size_t a, std::size_t b) {
    return std::tie(rec_u_[a], rec_stop_[a], rec_z_[a]) <
           std::tie(rec_u_[b], rec_stop_[b], rec_z_[b]);
  });
  su_.resize(n);
  su_z_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    su_[k] = rec_u_[idx[k]];
    su_z_[k] = rec_z_[idx[k]];
  }
  su_pw_ = power_prefix(su_, su_z_, 5);
}

double DensityEngine::weighted_exposure_at(double s) const {
  const auto a = std::lower_bound(su_.begin(), su_.end(), s) - su_.begin();
  const auto b = std::lower_bound(st_.begin(), st_.end(), s) - st_.begin();
  const double w =
      su_pw_[0][static_cast<std::size_t>(a)] - st_pw_[0][static_cast<std::size_t>(b)];
  return std::max(w, 0.0);
}

double DensityEngine::numerator_moment(double t, double h, int j, std::ptrdiff_t skip) const {
  check_point(t, h);
  if (j < 0 || j > 1) throw std::invalid_argument("numerator_moment: j must be 0 or 1");
  const auto lo = std::lower_bound(pay_t_.begin(), pay_t_.end(), t - h) - pay_t_.begin();
  const auto hi = std::upper_bound(pay_t_.begin(), pay_t_.end(), t + h) - pay_t_.begin();
  double scaled = 0.0;  // sum of w_k K(w) w^j with w = (T_k - t)/h
  if (h >= kPrefixPathMinBandwidth) {
    // K(w) w^j = 0.75 (w^j - w^{j+2}); powers of w from power sums of T.
    std::array<double, 4> p{};  // p[d] = sum w_k ((T_k - t)/h)^d over the window
    for (int d = 0; d <= j + 2; ++d) {
      double acc = 0.0;
      double tp = 1.0;  // (-t)^{d-m} built downward
      for (int m = d; m >= 0; --m) {
        const double sm = pay_pw_[static_cast<std::size_t>(m)][static_cast<std::size_t>(hi)] -
                          pay_pw_[static_cast<std::size_t>(m)][static_cast<std::size_t>(lo)];
        acc += kBinom[d][m] * sm * tp;
        tp *= -t;
      }
      p[static_cast<std::size_t>(d)] = acc / std::pow(h, d);
    }
    scaled = 0.75 * (p[static_cast<std::size_t>(j)] - p[static_cast<std::size_t>(j + 2)]);
  } else {
    for (auto k = lo; k < hi; ++k) {
      const double w = (pay_t_[static_cast<std::size_t>(k)] - t) / h;
      scaled += pay_w_[static_cast<std::size_t>(k)] * 0.75 * (1.0 - w * w) *
                (j == 0 ? 1.0 : w);
    }
  }
  if (skip >= 0) {
    const double w = (rec_stop_[static_cast<std::size_t>(skip)] - t) / h;
    if (w > -1.0 && w < 1.0)
      scaled -= rec_zt_[static_cast<std::size_t>(skip)] * 0.75 * (1.0 - w * w) *
                (j == 0 ? 1.0 : w);
  }
  // G_j = ((-h)^j / h) * scaled
  const double sign = (j % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(h, j - 1) * scaled;
}

double DensityEngine::endpoint_moment_sum(bool stops, double t, double h, int j) const {
  const std::vector<double>& x = stops ? st_ : su_;
  const std::vector<double>& z = stops ? st_z_ : su_z_;
  const auto& pw = stops ? st_pw_ : su_pw_;
  const auto lo = std::lower_bound(x.begin(), x.end(), t - h) - x.begin();
  const auto hi = std::upper_bound(x.begin(), x.end(), t + h) - x.begin();
  double s = kCkFull[j] * (pw[0].back() - pw[0][static_cast<std::size_t>(hi)]);
  if (h >= kPrefixPathMinBandwidth) {
    for (int d = 0; d <= kCkDegree[j]; ++d) {
      const double coef = kCkCoef[j][d];
      if (coef == 0.0) continue;
      double acc = 0.0;
      double tp = 1.0;
      for (int m = d; m >= 0; --m) {
        const double sm = pw[static_cast<std::size_t>(m)][static_cast<std::size_t>(hi)] -
                          pw[static_cast<std::size_t>(m)][static_cast<std::size_t>(lo)];
        acc += kBinom[d][m] * sm * tp;
        tp *= -t;
      }
      s += coef * acc / std::pow(h, d);
    }
  } else {
    for (auto k = lo; k < hi; ++k) {
      const double y = (x[static_cast<std::size_t>(k)] - t) / h;
      s += z[static_cast<std::size_t>(k)] * kernel_.partial_moment(y, j);
    }
  }
  return s;
}

double DensityEngine::exposure_moment(double t, double h, int j, std::ptrdiff_t skip) const {
  check_point(t, h);
  if (j < 0 || j > 2) throw std::invalid_argument("exposure_moment: j must be in {0, 1, 2}");
  double s = endpoint_moment_sum(true, t, h, j) - endpoint_moment_sum(false, t, h, j);
  if (skip >= 0) {
    const std::size_t i = static_cast<std::size_t>(skip);
    s -= rec_z_[i] * (kernel_.partial_moment((rec_stop_[i] - t) / h, j) -
                      kernel_.partial_moment((rec_u_[i] - t) / h, j));
  }
  const double sign = (j % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(h, j) * s;
}

bool DensityEngine::window_has_mass(double t, double h, std::ptrdiff_t skip) const {
  const double lo = t - h;
  const double hi = t + h;
  for (std::size_t i = 0; i < rec_u_.size(); ++i) {
    if (static_cast<std::ptrdiff_t>(i) == skip) continue;
    if (!(rec_z_[i] > 0.0)) continue;
    if (std::min(rec_stop_[i], hi) > std::max(rec_u_[i], lo)) return true;
  }
  return false;
}

DensityEngine::Value DensityEngine::local_constant_at(double t, double h,
                                                      std::ptrdiff_t skip) const {
  const double a0 = exposure_moment(t, h, 0, skip);
  if (!(a0 > 0.0)) return {0.0, false};
  // A roundoff-scale a0 can be pure cancellation residue (e.g. after the skip
  // subtraction empties the window); fall back to the exact overlap test so
  // the defined flag reflects whether any exposure mass is truly in reach.
  if (a0 < 1e-9 * su_pw_[0].back() && !window_has_mass(t, h, skip)) return {0.0, false};
  return {numerator_moment(t, h, 0, skip) / a0, true};
}

DensityEngine::Value DensityEngine::local_linear_at(double t, double h,
                                                    std::ptrdiff_t skip) const {
  const double a0 = exposure_moment(t, h, 0, skip);
  if (a0 < 1e-9 * su_pw_[0].back() && !window_has_mass(t, h, skip)) return {0.0, false};
  const double a1 = exposure_moment(t, h, 1, skip);
  const double a2 = exposure_moment(t, h, 2, skip);
  const double det = a0 * a2 - a1 * a1;
  if (!(det > 1e-12 * a0 * a2) || !(det > 0.0)) return {0.0, false};
  const double g0 = numerator_moment(t, h, 0, skip);
  const double g1 = numerator_moment(t, h, 1, skip);
  return {(a2 * g0 - a1 * g1) / det, true};
}

namespace {

DensityEstimate evaluate_grid(const ClaimDataset& ds, const SurvivalEstimate& surv, double h,
                              std::size_t grid_size, Kernel kernel, int degree) {
  if (grid_size < 2) throw std::invalid_argument("density: grid_size must be at least 2");
  check_point(0.0, h);
  DensityEngine engine(ds, surv, kernel);
  DensityEstimate out;
  out.degree = degree;
  out.orientation = TimeOrientation::reversed;
  out.values.resize(grid_size);
  out.flags.assign(grid_size, 0);
  for (std::size_t g = 0; g < grid_size; ++g) {
    const double t = static_cast<double>(g) / static_cast<double>(grid_size - 1);
    const DensityEngine::Value v = engine.at(t, h, degree);
    out.values[g] = v.value;
    out.flags[g] = v.defined ? 0 : 1;
  }
  return out;
}

}  // namespace

DensityEstimate local_constant(const ClaimDataset& ds, const SurvivalEstimate& surv, double h,
                               std::size_t grid_size, Kernel kernel) {
  return evaluate_grid(ds, surv, h, grid_size, kernel, 0);
}

DensityEstimate local_linear(const ClaimDataset& ds, const SurvivalEstimate& surv, double h,
                             std::size_t grid_size, Kernel kernel) {
  return evaluate_grid(ds, surv, h, grid_size, kernel, 1);
}

double aj_moment(const ClaimDataset& ds, const SurvivalEstimate& surv, double t, double h, int j,
                 Kernel kernel) {
  return DensityEngine(ds, surv, kernel).exposure_moment(t, h, j);
}

double g_moment(const ClaimDataset& ds, const SurvivalEstimate& surv, double t, double h, int j,
                Kernel kernel) {
  return DensityEngine(ds, surv, kernel).numerator_moment(t, h, j);
}

DensityEstimate reverse_density(const DensityEstimate& d) {
  DensityEstimate out = d;
  std::reverse(out.values.begin(), out.values.end());
  std::reverse(out.flags.begin(), out.flags.end());
  out.orientation = d.orientation == TimeOrientation::reversed ? TimeOrientation::natural
                                                               : TimeOrientation::reversed;
  return out;
}

ClaimDataset swap_time_roles(const ClaimDataset& ds) {
  ClaimDataset out = ds;
  for (ClaimRecord& r : out.records) std::swap(r.u, r.t);
  return out;
}

DensityEstimate estimate_for_U(const ClaimDataset& ds, int degree, double h,
                               std::size_t grid_size, Kernel kernel) {
  const ClaimDataset swapped = swap_time_roles(ds);
  const SurvivalEstimate surv = km_weighted(swapped);
  const DensityEstimate rev = evaluate_grid(swapped, surv, h, grid_size, kernel, degree);
  return reverse_density(rev);
}

}  // namespace ccl
