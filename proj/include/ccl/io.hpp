#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ccl/claims.hpp"
#include "ccl/density.hpp"
#include "ccl/reserving.hpp"
#include "ccl/simulator.hpp"
#include "ccl/survival.hpp"
#include "ccl/triangle.hpp"

namespace ccl {

// "%.17g": every double round-trips, outputs are byte-deterministic.
std::string format_g17(double value);

// Read a claims CSV with header `accident,delay,amount` (numeric, original
// units) or `accident_date,payment_date,amount` (ISO-8601 dates; delay is
// the day difference, accident relative to `start_date` or the earliest
// accident in the file).  Invalid rows fail the whole ingest; the message
// lists up to 20 offending lines.  `horizon` is in original units; when <= 0
// the observed max(u + t) is used.  The result is normalized with
// unit_scale = horizon.
ClaimDataset ingest_claims(const std::string& path, double horizon = 0.0,
                           const std::string& start_date = "");

void write_file(const std::string& path, const std::string& content);

// CSV builders.  Time columns are converted back to original units via the
// provided unit scale; density values are divided by it (densities carry the
// reciprocal time unit).
std::string density_csv(const DensityEstimate& estimate, double unit_scale);
std::string survival_csv(const SurvivalEstimate& survival, double unit_scale);

struct ScoreRow {
  std::string target;  // "T" | "U"
  double h = 0.0;
  double score = 0.0;
};
std::string scores_csv(const std::vector<ScoreRow>& rows);

// Observed cells (r + s <= m-1) as `row,col,value`.
std::string triangle_csv(const BinnedTriangle& tri);
// Full rectangle as `row,col,value`.
std::string matrix_csv(const std::vector<std::vector<double>>& cells);

// Records as stored (caller controls units): header `accident,delay,amount`.
std::string claims_csv(const ClaimDataset& ds);

// One row per claim payment with the policy's metadata attached.
std::string micro_events_csv(const MicroEventLog& log);

// Cash-flow vector as `period,start,end,amount` with period boundaries in
// original units.
std::string cashflow_csv(const std::vector<double>& amounts, double period_length);

// Report JSON with keys total_paid, fraction, reserve, cashflow_future,
// cashflow_accident, method, bandwidths (the caller supplies the bandwidths
// object; null for chain ladder).
nlohmann::ordered_json reserve_report_json(const ReserveReport& report,
                                           const nlohmann::ordered_json& bandwidths);

struct BenchRunRow {
  std::string scenario;  // scenario id or valuation tag
  std::size_t n = 0;
  std::string method;  // "LL" | "LC" | "CL"
  std::size_t run = 0;
  bool valid = true;
  double err2 = 0.0;  // meaningful when valid
};
std::string bench_runs_csv(const std::vector<BenchRunRow>& rows);

struct BenchSummaryRow {
  std::string scenario;
  std::size_t n = 0;
  std::string method;
  double median = 0.0;
  double mean = 0.0;
  double sd = 0.0;
  std::size_t invalid_count = 0;
};
std::string bench_summary_csv(const std::vector<BenchSummaryRow>& rows);

}  // namespace ccl
