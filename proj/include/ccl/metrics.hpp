#pragma once

#include <functional>
#include <vector>

#include "ccl/density.hpp"

namespace ccl {

// Integrated squared error of the estimate against a reference density,
// trapezoidal rule on the estimate's own grid.  Undefined nodes count as
// zero-valued.  The estimate and the reference must share the orientation.
double ise(const DensityEstimate& estimate,
           const std::function<double(double)>& reference);

// ((estimate - truth) / truth)^2; truth must be nonzero.
double squared_relative_error(double estimate, double truth);

// Mean of squared differences; vectors must be nonempty and equal length.
double mse(const std::vector<double>& estimates, const std::vector<double>& truths);

struct SampleStats {
  double median = 0.0;
  double mean = 0.0;
  double sd = 0.0;  // unbiased; 0 for a single observation
};

SampleStats sample_stats(std::vector<double> values);

}  // namespace ccl
