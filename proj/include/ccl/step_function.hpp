#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ccl {

//! Right-continuous step function with finitely many jumps.
//!
//! The function is stored as the value *after* each jump, so evaluation never
//! re-accumulates jump sizes (the product-limit recursion of a survival curve
//! is preserved bit-for-bit).
class StepFunction {
 public:
  StepFunction() = default;

  //! @param jump_times strictly increasing jump locations
  //! @param values_after value taken on [jump_times[k], jump_times[k+1])
  //! @param initial_value value taken before the first jump
  StepFunction(std::vector<double> jump_times, std::vector<double> values_after,
               double initial_value)
      : times_(std::move(jump_times)),
        values_(std::move(values_after)),
        initial_(initial_value) {
    if (times_.size() != values_.size())
      throw std::invalid_argument("StepFunction: times/values size mismatch");
    for (std::size_t k = 1; k < times_.size(); ++k)
      if (!(times_[k - 1] < times_[k]))
        throw std::invalid_argument("StepFunction: jump times must be strictly increasing");
  }

  //! Build from jump sizes; values are accumulated left to right.
  static StepFunction from_jumps(std::vector<double> jump_times,
                                 const std::vector<double>& jump_sizes,
                                 double initial_value) {
    std::vector<double> values(jump_sizes.size());
    double acc = initial_value;
    for (std::size_t k = 0; k < jump_sizes.size(); ++k) {
      acc += jump_sizes[k];
      values[k] = acc;
    }
    return StepFunction(std::move(jump_times), std::move(values), initial_value);
  }

  //! Value at s (right-continuous: jumps at s are included).
  double value(double s) const {
    auto it = std::upper_bound(times_.begin(), times_.end(), s);
    if (it == times_.begin()) return initial_;
    return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
  }

  //! Left limit at s (jumps at exactly s are excluded).
  double left_limit(double s) const {
    auto it = std::lower_bound(times_.begin(), times_.end(), s);
    if (it == times_.begin()) return initial_;
    return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
  }

  double initial_value() const { return initial_; }
  const std::vector<double>& jump_times() const { return times_; }
  const std::vector<double>& values_after_jumps() const { return values_; }

  //! Jump sizes derived from consecutive values.
  std::vector<double> jump_sizes() const {
    std::vector<double> sizes(times_.size());
    double prev = initial_;
    for (std::size_t k = 0; k < times_.size(); ++k) {
      sizes[k] = values_[k] - prev;
      prev = values_[k];
    }
    return sizes;
  }

  std::size_t size() const { return times_.size(); }

 private:
  std::vector<double> times_;
  std::vector<double> values_;
  double initial_ = 0.0;
};

}  // namespace ccl
