#pragma once

#include <cstddef>
#include <vector>

namespace ccl {

//! One paid claim: accident time, payment delay and paid amount.
struct ClaimRecord {
  double u = 0.0;  //! accident (underwriting/occurrence) time since time origin
  double t = 0.0;  //! delay from accident to payment
  double z = 0.0;  //! paid amount, >= 0
};

//! A set of claims observed up to a common horizon.
//!
//! Every record must satisfy 0 <= u, 0 <= t and u + t <= horizon: only claims
//! paid by the horizon are observable.  unit_scale remembers how many original
//! time units one unit of the current scale represents (handy after
//! normalize()).
struct ClaimDataset {
  std::vector<ClaimRecord> records;
  double horizon = 1.0;
  double unit_scale = 1.0;

  std::size_t size() const { return records.size(); }
  bool normalized() const { return horizon == 1.0; }

  //! Reversed payment time horizon - t of record i (requires normalized data
  //! only in the sense that the caller passes the matching horizon).
  double reversed_time(std::size_t i) const { return horizon - records[i].t; }
};

//! Validate dataset constraints; throws std::invalid_argument naming the first
//! offending record index.
void validate(const ClaimDataset& ds);

//! Rescale all times by 1/horizon so the new horizon is 1.
//! unit_scale is multiplied by the old horizon.  Exact for horizon == 1.
[[nodiscard]] ClaimDataset normalize(const ClaimDataset& ds);

//! Reversed development time horizon - t; errors if t is outside [0, horizon].
double reversed_delay(double t, double horizon);

//! Number of claims at risk in reversed time at s: #\{i : u_i < s <= T_i^R\}.
double exposure_count(const ClaimDataset& ds, double s);

//! Cost-weighted exposure W(s) = sum_i z_i * I(u_i < s <= T_i^R).
double weighted_exposure(const ClaimDataset& ds, double s);

//! Integral of exposure over [a, b], either weighted by z or plain counts.
//! Computed by an event-sorted sweep over the exposure breakpoints.
double exposure_integral(const ClaimDataset& ds, double a, double b, bool weighted);

//! Precomputed sorted-event view of a dataset for O(log n) exposure queries.
class ExposureProcess {
 public:
  explicit ExposureProcess(const ClaimDataset& ds);

  double count(double s) const;
  double weighted(double s) const;
  //! Exact integral of the weighted (or count) exposure over [a, b].
  double integral(double a, double b, bool use_weights) const;

 private:
  // starts (u) and stops (T^R), each sorted, with prefix sums of weights and
  // of weight*time so integrals have a closed form.
  std::vector<double> start_, stop_;
  std::vector<double> start_cumw_, stop_cumw_;    // weighted
  std::vector<double> start_cumwt_, stop_cumwt_;  // weighted * time
  std::vector<double> start_cumc_, stop_cumc_;    // counts
  std::vector<double> start_cumct_, stop_cumct_;  // count * time
};

}  // namespace ccl
