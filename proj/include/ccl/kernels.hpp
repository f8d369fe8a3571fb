#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ccl {

//! Symmetric smoothing kernel on [-1, 1].  Only the Epanechnikov kernel is
//! shipped; it is polynomial, so partial moment integrals have closed forms
//! and kernel-weighted exposure integrals can be evaluated exactly.
class Kernel {
 public:
  static Kernel epanechnikov() { return Kernel{}; }

  //! K(s) = 0.75 (1 - s^2) on [-1, 1], 0 outside.
  double operator()(double s) const {
    if (s < -1.0 || s > 1.0) return 0.0;
    return 0.75 * (1.0 - s * s);
  }

  double support_radius() const { return 1.0; }

  //! Second moment mu_2 = integral s^2 K(s) ds.
  double mu2() const { return 0.2; }

  //! Roughness R(K) = integral K(s)^2 ds.
  double roughness() const { return 0.6; }

  //! Partial moment integral C_j(y) = integral_{-1}^{min(max(y,-1),1)} v^j K(v) dv
  //! for j in {0, 1, 2, 3}.
  double partial_moment(double y, int j) const {
    const double v = std::clamp(y, -1.0, 1.0);
    const double v2 = v * v, v3 = v2 * v, v4 = v3 * v, v5 = v4 * v, v6 = v5 * v;
    switch (j) {
      case 0: return 0.75 * (v - v3 / 3.0) + 0.5;
      case 1: return 0.75 * (v2 / 2.0 - v4 / 4.0) - 0.1875;
      case 2: return 0.75 * (v3 / 3.0 - v5 / 5.0) + 0.1;
      case 3: return 0.75 * (v4 / 4.0 - v6 / 6.0) - 0.0625;
      default: throw std::invalid_argument("Kernel::partial_moment: j must be in {0,..,3}");
    }
  }

  std::string name() const { return "epanechnikov"; }
};

}  // namespace ccl
