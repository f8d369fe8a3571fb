#pragma once

// Independent brute-force reference implementations used to validate the
// library's estimators.  Everything here is written in the most direct way
// possible (O(n^2) loops, generic quadrature on raw integrands) and shares no
// numerical machinery with the library beyond elementary arithmetic.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "ccl/claims.hpp"

namespace oracle {

struct Rec {
  double u = 0.0;  // accident time (normalized)
  double t = 0.0;  // payment delay (normalized)
  double z = 0.0;  // payment amount
  double stop() const { return 1.0 - t; }  // reversed payment time
};

std::vector<Rec> to_recs(const ccl::ClaimDataset& ds);
ccl::ClaimDataset to_dataset(const std::vector<Rec>& recs);

// Random interior dataset with frequent reversed-time ties, t + u < 1 - 1e-6.
std::vector<Rec> random_dataset(std::mt19937_64& rng, std::size_t n_min = 2,
                                std::size_t n_max = 50);

// ----- exposure -----------------------------------------------------------
double exposure_count(const std::vector<Rec>& recs, double s);
double weighted_exposure(const std::vector<Rec>& recs, double s);
// integral over (a, b] of the weighted exposure, record by record
double exposure_integral(const std::vector<Rec>& recs, double a, double b);

// ----- hazard and survival -------------------------------------------------
struct Jump {
  double time = 0.0;
  double increment = 0.0;
};
// pooled ties, ascending reversed time; increment = (sum z at s) / W(s)
std::vector<Jump> aalen(const std::vector<Rec>& recs);
// product-limit survival: value at s (right-continuous)
double km_value(const std::vector<Rec>& recs, double s);
// left limit: product over jumps strictly before s
double km_left(const std::vector<Rec>& recs, double s);

// ----- histogram hazard -----------------------------------------------------
// numerator: sum of z with stop in bin l of m equal bins of [0,1]
// denominator: integral of W over the bin (via exposure_integral)
std::vector<double> hist_hazard(const std::vector<Rec>& recs, std::size_t m);

// ----- kernel estimators ----------------------------------------------------
double epan(double x);  // 0.75 (1 - x^2) on [-1, 1]

// G_j(t) = sum_i K_h(t - stop_i) (t - stop_i)^j km_left(stop_i) z_i,
// optionally skipping one record
double g_moment(const std::vector<Rec>& recs, double t, double h, int j,
                std::ptrdiff_t skip = -1);
// a_j(t) = integral K_h(t - s) (t - s)^j W(s) ds via piecewise Gauss
// quadrature on the raw integrand between event points
double a_moment(const std::vector<Rec>& recs, double t, double h, int j,
                std::ptrdiff_t skip = -1);

struct Value {
  double value = 0.0;
  bool defined = false;
};
Value local_constant_at(const std::vector<Rec>& recs, double t, double h,
                        std::ptrdiff_t skip = -1);
Value local_linear_at(const std::vector<Rec>& recs, double t, double h,
                      std::ptrdiff_t skip = -1);
Value estimate_at(const std::vector<Rec>& recs, double t, double h, int degree,
                  std::ptrdiff_t skip = -1);

// ----- cross-validation -----------------------------------------------------
// integral over [0,1] of the squared estimate times W, by refined piecewise
// Gauss quadrature, minus twice the leave-one-out sum; +inf when every
// leave-one-out value is undefined
double cv_score(const std::vector<Rec>& recs, double h, int degree);

// ----- reserve fraction -----------------------------------------------------
// ratio of future to observed mass for piecewise-linear densities given by
// node values on uniform grids; dense trapezoid refinement
double reserve_fraction(const std::vector<double>& ft_nodes,
                        const std::vector<double>& fu_nodes,
                        std::size_t refine = 20001);

}  // namespace oracle
