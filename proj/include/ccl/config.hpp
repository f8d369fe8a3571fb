#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccl/bandwidth.hpp"

namespace ccl {

enum class EstimatorKind { local_linear, local_constant, chain_ladder };

std::string estimator_label(EstimatorKind kind);  // "LL" | "LC" | "CL"

// Scenario benchmark block: scenarios x sample sizes x runs.
struct ScenarioBenchConfig {
  std::vector<int> ids = {1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<std::size_t> sizes = {100, 1000, 10000};
  std::size_t runs = 200;
  // Bandwidth rule per run: "ise" picks the grid candidate minimizing the
  // integrated squared error against the known truth (the study's oracle
  // bandwidth); "cv" uses cross-validation.
  std::string bandwidth_rule = "ise";
  std::size_t triangle_bins = 20;
};

// Micro-model benchmark block: valuation dates x runs.
struct MicroBenchConfig {
  std::int32_t underwriting_days = 720;
  // Default: month-end days from month 9 through month 29 (30-day months).
  std::vector<std::int32_t> valuation_days;
  std::size_t runs = 200;
  double bandwidth_t_days = 30.0;  // fixed bandwidths in days
  double bandwidth_u_days = 90.0;
  std::int32_t month_days = 30;    // chain-ladder aggregation period
};

struct DiagnoseConfig {
  std::size_t bins = 8;
  std::size_t s_lo = 0;
  std::size_t s_hi = 2;
  std::size_t grid_size = 101;
};

struct RunConfig {
  std::string input;            // claims CSV path (estimate/reserve/diagnose)
  double horizon = 0.0;         // original units; <= 0: inferred from data
  std::string start_date;       // optional origin for date-mode ingestion
  EstimatorKind estimator = EstimatorKind::local_linear;
  std::string kernel = "epanechnikov";
  BandwidthSpec bandwidth_t = BandwidthSpec::cross_validated();
  BandwidthSpec bandwidth_u = BandwidthSpec::cross_validated();
  std::size_t grid_size = 101;
  std::size_t triangle_bins = 20;
  double period_length = 0.0;   // cash-flow period, original units; <= 0: horizon/10
  std::uint64_t seed = 1;
  int threads = 0;              // 0: hardware concurrency
  std::optional<ScenarioBenchConfig> scenario;
  std::optional<MicroBenchConfig> micro;
  DiagnoseConfig diagnose;
};

// Parse and validate a JSON config.  Unknown keys anywhere are errors; all
// values are validated before any computation starts.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

std::vector<std::int32_t> default_micro_valuation_days();

}  // namespace ccl
