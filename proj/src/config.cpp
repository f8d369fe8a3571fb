#include "ccl/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ccl {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw std::runtime_error("config error at " + where + ": " + what);
}

void expect_keys(const json& j, const std::string& where,
                 const std::set<std::string>& allowed) {
  if (!j.is_object()) bad(where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) bad(where, "unknown key `" + it.key() + "`");
  }
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where, "expected a number");
  return j.get<double>();
}

std::size_t get_size(const json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    bad(where, "expected a nonnegative integer");
  }
  return j.get<std::size_t>();
}

std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "expected a string");
  return j.get<std::string>();
}

BandwidthSpec parse_bandwidth(const json& j, const std::string& where) {
  expect_keys(j, where, {"mode", "h", "pieces", "grid"});
  std::string mode = get_string(j.at("mode"), where + ".mode");
  if (mode == "fixed") {
    if (!j.contains("h")) bad(where, "fixed mode requires `h`");
    if (j.contains("pieces") || j.contains("grid")) {
      bad(where, "fixed mode takes only `h`");
    }
    return BandwidthSpec::fixed_h(get_number(j.at("h"), where + ".h"));
  }
  if (mode == "cv") {
    if (j.contains("h") || j.contains("pieces")) {
      bad(where, "cv mode takes only an optional `grid`");
    }
    BandwidthSpec spec = BandwidthSpec::cross_validated();
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      if (!g.is_array() || g.empty()) bad(where + ".grid", "expected a nonempty array");
      for (std::size_t i = 0; i < g.size(); ++i) {
        spec.candidates.push_back(
            get_number(g[i], where + ".grid[" + std::to_string(i) + "]"));
      }
    }
    return spec;
  }
  if (mode == "piecewise") {
    if (!j.contains("pieces")) bad(where, "piecewise mode requires `pieces`");
    if (j.contains("h") || j.contains("grid")) {
      bad(where, "piecewise mode takes only `pieces`");
    }
    const json& arr = j.at("pieces");
    if (!arr.is_array() || arr.empty()) {
      bad(where + ".pieces", "expected a nonempty array");
    }
    std::vector<BandwidthPiece> pieces;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::string pw = where + ".pieces[" + std::to_string(i) + "]";
      expect_keys(arr[i], pw, {"from", "to", "h"});
      BandwidthPiece piece;
      piece.from = get_number(arr[i].at("from"), pw + ".from");
      piece.to = get_number(arr[i].at("to"), pw + ".to");
      piece.h = get_number(arr[i].at("h"), pw + ".h");
      pieces.push_back(piece);
    }
    return BandwidthSpec::piecewise(pieces);
  }
  bad(where + ".mode", "expected `fixed`, `cv`, or `piecewise`");
}

ScenarioBenchConfig parse_scenario(const json& j, const std::string& where) {
  expect_keys(j, where,
              {"ids", "sizes", "runs", "bandwidth_rule", "triangle_bins"});
  ScenarioBenchConfig cfg;
  if (j.contains("ids")) {
    const json& a = j.at("ids");
    if (!a.is_array() || a.empty()) bad(where + ".ids", "expected a nonempty array");
    cfg.ids.clear();
    for (std::size_t i = 0; i < a.size(); ++i) {
      std::string iw = where + ".ids[" + std::to_string(i) + "]";
      long long id = static_cast<long long>(get_number(a[i], iw));
      if (id < 1 || id > 8) bad(iw, "scenario id must be in 1..8");
      cfg.ids.push_back(static_cast<int>(id));
    }
  }
  if (j.contains("sizes")) {
    const json& a = j.at("sizes");
    if (!a.is_array() || a.empty()) bad(where + ".sizes", "expected a nonempty array");
    cfg.sizes.clear();
    for (std::size_t i = 0; i < a.size(); ++i) {
      std::string iw = where + ".sizes[" + std::to_string(i) + "]";
      std::size_t n = get_size(a[i], iw);
      if (n == 0) bad(iw, "sample size must be >= 1");
      cfg.sizes.push_back(n);
    }
  }
  if (j.contains("runs")) {
    cfg.runs = get_size(j.at("runs"), where + ".runs");
    if (cfg.runs == 0) bad(where + ".runs", "must be >= 1");
  }
  if (j.contains("bandwidth_rule")) {
    cfg.bandwidth_rule = get_string(j.at("bandwidth_rule"), where + ".bandwidth_rule");
    if (cfg.bandwidth_rule != "ise" && cfg.bandwidth_rule != "cv") {
      bad(where + ".bandwidth_rule", "expected `ise` or `cv`");
    }
  }
  if (j.contains("triangle_bins")) {
    cfg.triangle_bins = get_size(j.at("triangle_bins"), where + ".triangle_bins");
    if (cfg.triangle_bins < 2) bad(where + ".triangle_bins", "must be >= 2");
  }
  return cfg;
}

MicroBenchConfig parse_micro(const json& j, const std::string& where) {
  expect_keys(j, where,
              {"underwriting_days", "valuation_days", "runs", "bandwidth_t_days",
               "bandwidth_u_days", "month_days"});
  MicroBenchConfig cfg;
  cfg.valuation_days = default_micro_valuation_days();
  if (j.contains("underwriting_days")) {
    cfg.underwriting_days =
        static_cast<std::int32_t>(get_size(j.at("underwriting_days"), where + ".underwriting_days"));
    if (cfg.underwriting_days < 1) bad(where + ".underwriting_days", "must be >= 1");
  }
  if (j.contains("valuation_days")) {
    const json& a = j.at("valuation_days");
    if (!a.is_array() || a.empty()) {
      bad(where + ".valuation_days", "expected a nonempty array");
    }
    cfg.valuation_days.clear();
    for (std::size_t i = 0; i < a.size(); ++i) {
      std::string iw = where + ".valuation_days[" + std::to_string(i) + "]";
      std::size_t d = get_size(a[i], iw);
      if (d == 0) bad(iw, "valuation day must be >= 1");
      cfg.valuation_days.push_back(static_cast<std::int32_t>(d));
    }
  }
  if (j.contains("runs")) {
    cfg.runs = get_size(j.at("runs"), where + ".runs");
    if (cfg.runs == 0) bad(where + ".runs", "must be >= 1");
  }
  if (j.contains("bandwidth_t_days")) {
    cfg.bandwidth_t_days = get_number(j.at("bandwidth_t_days"), where + ".bandwidth_t_days");
    if (!(cfg.bandwidth_t_days > 0.0)) bad(where + ".bandwidth_t_days", "must be > 0");
  }
  if (j.contains("bandwidth_u_days")) {
    cfg.bandwidth_u_days = get_number(j.at("bandwidth_u_days"), where + ".bandwidth_u_days");
    if (!(cfg.bandwidth_u_days > 0.0)) bad(where + ".bandwidth_u_days", "must be > 0");
  }
  if (j.contains("month_days")) {
    cfg.month_days = static_cast<std::int32_t>(get_size(j.at("month_days"), where + ".month_days"));
    if (cfg.month_days < 1) bad(where + ".month_days", "must be >= 1");
  }
  return cfg;
}

DiagnoseConfig parse_diagnose(const json& j, const std::string& where) {
  expect_keys(j, where, {"bins", "s_lo", "s_hi", "grid_size"});
  DiagnoseConfig cfg;
  if (j.contains("bins")) {
    cfg.bins = get_size(j.at("bins"), where + ".bins");
    if (cfg.bins < 2) bad(where + ".bins", "must be >= 2");
  }
  if (j.contains("s_lo")) cfg.s_lo = get_size(j.at("s_lo"), where + ".s_lo");
  if (j.contains("s_hi")) cfg.s_hi = get_size(j.at("s_hi"), where + ".s_hi");
  if (cfg.s_lo > cfg.s_hi) bad(where, "s_lo must be <= s_hi");
  if (cfg.s_hi >= cfg.bins - 1) bad(where, "s_hi must be <= bins - 2");
  if (j.contains("grid_size")) {
    cfg.grid_size = get_size(j.at("grid_size"), where + ".grid_size");
    if (cfg.grid_size < 2) bad(where + ".grid_size", "must be >= 2");
  }
  return cfg;
}

}  // namespace

std::string estimator_label(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::local_linear: return "LL";
    case EstimatorKind::local_constant: return "LC";
    case EstimatorKind::chain_ladder: return "CL";
  }
  return "?";
}

std::vector<std::int32_t> default_micro_valuation_days() {
  std::vector<std::int32_t> days;
  for (int month = 9; month <= 29; ++month) days.push_back(month * 30);
  return days;
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config is not valid JSON: ") + e.what());
  }
  expect_keys(j, "$",
              {"input", "horizon", "start_date", "estimator", "kernel",
               "bandwidth_t", "bandwidth_u", "grid_size", "triangle_bins",
               "period_length", "seed", "threads", "scenario", "micro",
               "diagnose"});

  RunConfig cfg;
  if (j.contains("input")) cfg.input = get_string(j.at("input"), "$.input");
  if (j.contains("horizon")) {
    cfg.horizon = get_number(j.at("horizon"), "$.horizon");
    if (!(cfg.horizon > 0.0)) bad("$.horizon", "must be > 0");
  }
  if (j.contains("start_date")) {
    cfg.start_date = get_string(j.at("start_date"), "$.start_date");
  }
  if (j.contains("estimator")) {
    std::string e = get_string(j.at("estimator"), "$.estimator");
    if (e == "LL") cfg.estimator = EstimatorKind::local_linear;
    else if (e == "LC") cfg.estimator = EstimatorKind::local_constant;
    else if (e == "CL") cfg.estimator = EstimatorKind::chain_ladder;
    else bad("$.estimator", "expected `LL`, `LC`, or `CL`");
  }
  if (j.contains("kernel")) {
    cfg.kernel = get_string(j.at("kernel"), "$.kernel");
    if (cfg.kernel != "epanechnikov") {
      bad("$.kernel", "only `epanechnikov` is supported");
    }
  }
  try {
    if (j.contains("bandwidth_t")) {
      cfg.bandwidth_t = parse_bandwidth(j.at("bandwidth_t"), "$.bandwidth_t");
    }
    if (j.contains("bandwidth_u")) {
      cfg.bandwidth_u = parse_bandwidth(j.at("bandwidth_u"), "$.bandwidth_u");
    }
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("config error: ") + e.what());
  }
  if (j.contains("grid_size")) {
    cfg.grid_size = get_size(j.at("grid_size"), "$.grid_size");
    if (cfg.grid_size < 2) bad("$.grid_size", "must be >= 2");
  }
  if (j.contains("triangle_bins")) {
    cfg.triangle_bins = get_size(j.at("triangle_bins"), "$.triangle_bins");
    if (cfg.triangle_bins < 2) bad("$.triangle_bins", "must be >= 2");
  }
  if (j.contains("period_length")) {
    cfg.period_length = get_number(j.at("period_length"), "$.period_length");
    if (!(cfg.period_length > 0.0)) bad("$.period_length", "must be > 0");
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer() && !j.at("seed").is_number_unsigned()) {
      bad("$.seed", "expected an integer");
    }
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("threads")) {
    cfg.threads = static_cast<int>(get_size(j.at("threads"), "$.threads"));
  }
  if (j.contains("scenario")) {
    cfg.scenario = parse_scenario(j.at("scenario"), "$.scenario");
  }
  if (j.contains("micro")) cfg.micro = parse_micro(j.at("micro"), "$.micro");
  if (j.contains("diagnose")) {
    cfg.diagnose = parse_diagnose(j.at("diagnose"), "$.diagnose");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace ccl
