#pragma once

#include <string>
#include <vector>

#include "ccl/config.hpp"

namespace ccl {

struct PipelineResult {
  std::vector<std::string> files;  // paths written, in order
};

// Ingest -> survival -> bandwidths -> densities (or triangle route for CL);
// writes density_T.csv, density_U.csv, survival.csv, scores.csv -- or
// triangle.csv and completed.csv when the estimator is CL.
PipelineResult run_estimate(const RunConfig& cfg, const std::string& out_dir);

// As run_estimate, then the reserve: writes report.json,
// cashflow_future.csv, cashflow_accident.csv.
PipelineResult run_reserve(const RunConfig& cfg, const std::string& out_dir);

// Writes scenario claim files (scenario<id>_n<n>.csv plus
// scenario_truths.csv) and/or the micro event log (micro_events.csv),
// depending on which config blocks are present.
PipelineResult run_simulate(const RunConfig& cfg, const std::string& out_dir);

// Scenario benchmark (bench_runs.csv, bench_summary.csv) and/or micro
// benchmark (micro_runs.csv, micro_mse.csv).
PipelineResult run_bench(const RunConfig& cfg, const std::string& out_dir);

// Independence and multiplicativity checks: independence.csv,
// multiplicativity.csv, diagnostics.json.
PipelineResult run_diagnose(const RunConfig& cfg, const std::string& out_dir);

}  // namespace ccl
