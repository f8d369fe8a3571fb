#include "ccl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ccl {

namespace {

GaussRule compute_rule(int order) {
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  const int n = order;
  for (int k = 0; k < (n + 1) / 2; ++k) {
    // Newton iteration on P_n from the Chebyshev-based initial guess.
    double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const std::size_t i = static_cast<std::size_t>(k);
    const std::size_t j = static_cast<std::size_t>(n - 1 - k);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_rule(int order) {
  if (order < 1) throw std::invalid_argument("gauss_rule: order must be >= 1");
  static std::map<int, GaussRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
  return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int order) {
  if (!(b > a)) return 0.0;
  const GaussRule& rule = gauss_rule(order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    s += rule.weights[k] * f(mid + half * rule.nodes[k]);
  return s * half;
}

double integrate_piecewise_gl(const std::function<double(double)>& f,
                              const std::vector<double>& breakpoints, int order) {
  double s = 0.0;
  for (std::size_t k = 1; k < breakpoints.size(); ++k)
    s += integrate_gl(f, breakpoints[k - 1], breakpoints[k], order);
  return s;
}

double integrate_simpson(const std::function<double(double)>& f, double a, double b,
                         std::size_t subintervals) {
  if (subintervals < 2 || subintervals % 2 != 0)
    throw std::invalid_argument("integrate_simpson: subinterval count must be even and >= 2");
  const double h = (b - a) / static_cast<double>(subintervals);
  double s = f(a) + f(b);
  for (std::size_t k = 1; k < subintervals; ++k)
    s += f(a + h * static_cast<double>(k)) * (k % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

std::vector<double> clipped_breakpoints(std::vector<double> points, double lo, double hi) {
  std::vector<double> out;
  out.reserve(points.size() + 2);
  out.push_back(lo);
  std::sort(points.begin(), points.end());
  for (double p : points)
    if (p > lo && p < hi) out.push_back(p);
  out.push_back(hi);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace ccl
