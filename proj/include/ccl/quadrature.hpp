#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ccl {

//! Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

//! Cached rule of the given order (order >= 1).
const GaussRule& gauss_rule(int order);

//! Integrate f over [a, b] with one Gauss-Legendre panel.
double integrate_gl(const std::function<double(double)>& f, double a, double b, int order);

//! Integrate f over consecutive panels given by sorted breakpoints.
double integrate_piecewise_gl(const std::function<double(double)>& f,
                              const std::vector<double>& breakpoints, int order);

//! Composite Simpson rule with the given (even) number of subintervals.
double integrate_simpson(const std::function<double(double)>& f, double a, double b,
                         std::size_t subintervals);

//! Sort, deduplicate and clip a breakpoint list to [lo, hi], including both ends.
std::vector<double> clipped_breakpoints(std::vector<double> points, double lo, double hi);

}  // namespace ccl
