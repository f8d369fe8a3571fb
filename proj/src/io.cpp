#include "ccl/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ccl {

std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

// Days since 1970-01-01 for a proleptic Gregorian date (civil-days
// algorithm); exact for all in-range dates.
long days_from_civil(long y, unsigned m, unsigned d) {
  y -= m <= 2;
  long era = (y >= 0 ? y : y - 399) / 400;
  unsigned yoe = static_cast<unsigned>(y - era * 400);
  unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

bool parse_iso_date(const std::string& s, long& days) {
  unsigned y, m, d;
  char extra;
  if (std::sscanf(s.c_str(), "%4u-%2u-%2u%c", &y, &m, &d, &extra) != 3) return false;
  if (m < 1 || m > 12 || d < 1 || d > 31) return false;
  days = days_from_civil(static_cast<long>(y), m, d);
  return true;
}

}  // namespace

ClaimDataset ingest_claims(const std::string& path, double horizon,
                           const std::string& start_date) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open claims file: " + path);

  std::string header_line;
  if (!std::getline(in, header_line)) {
    throw std::runtime_error("claims file is empty: " + path);
  }
  if (!header_line.empty() && header_line.back() == '\r') header_line.pop_back();
  std::vector<std::string> header = split_csv_line(header_line);

  bool date_mode;
  if (header == std::vector<std::string>{"accident", "delay", "amount"}) {
    date_mode = false;
  } else if (header ==
             std::vector<std::string>{"accident_date", "payment_date", "amount"}) {
    date_mode = true;
  } else {
    throw std::runtime_error(
        "claims file header must be `accident,delay,amount` or "
        "`accident_date,payment_date,amount`: " + path);
  }

  long origin = 0;
  bool have_origin = false;
  if (date_mode && !start_date.empty()) {
    if (!parse_iso_date(start_date, origin)) {
      throw std::runtime_error("invalid start_date (expected YYYY-MM-DD): " +
                               start_date);
    }
    have_origin = true;
  }

  struct RawRow {
    std::size_t line;
    double u, t, z;
  };
  std::vector<RawRow> rows;
  std::vector<std::string> errors;
  auto fail = [&errors](std::size_t line, const std::string& what) {
    if (errors.size() < 20) {
      errors.push_back("line " + std::to_string(line) + ": " + what);
    }
  };

  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 3) {
      fail(lineno, "expected 3 fields, got " + std::to_string(f.size()));
      continue;
    }
    double u = 0.0, t = 0.0, z = 0.0;
    if (date_mode) {
      long acc = 0, pay = 0;
      if (!parse_iso_date(f[0], acc)) {
        fail(lineno, "malformed accident_date `" + f[0] + "`");
        continue;
      }
      if (!parse_iso_date(f[1], pay)) {
        fail(lineno, "malformed payment_date `" + f[1] + "`");
        continue;
      }
      if (pay < acc) {
        fail(lineno, "payment_date precedes accident_date");
        continue;
      }
      u = static_cast<double>(acc);  // origin subtracted after the scan
      t = static_cast<double>(pay - acc);
    } else {
      if (!parse_double(f[0], u)) {
        fail(lineno, "malformed accident value `" + f[0] + "`");
        continue;
      }
      if (!parse_double(f[1], t)) {
        fail(lineno, "malformed delay value `" + f[1] + "`");
        continue;
      }
    }
    if (!parse_double(f[2], z)) {
      fail(lineno, "malformed amount `" + f[2] + "`");
      continue;
    }
    if (!std::isfinite(u) || !std::isfinite(t) || !std::isfinite(z)) {
      fail(lineno, "non-finite value");
      continue;
    }
    if (t < 0.0) {
      fail(lineno, "negative delay");
      continue;
    }
    if (z < 0.0) {
      fail(lineno, "negative amount");
      continue;
    }
    rows.push_back({lineno, u, t, z});
  }

  if (date_mode && !have_origin) {
    double min_u = std::numeric_limits<double>::infinity();
    for (const RawRow& r : rows) min_u = std::min(min_u, r.u);
    origin = rows.empty() ? 0 : static_cast<long>(min_u);
  }
  if (date_mode) {
    for (RawRow& r : rows) r.u -= static_cast<double>(origin);
  }
  for (const RawRow& r : rows) {
    if (r.u < 0.0) fail(r.line, "accident precedes the time origin");
  }

  double span = horizon;
  if (span <= 0.0) {
    span = 0.0;
    for (const RawRow& r : rows) span = std::max(span, r.u + r.t);
  }
  if (errors.empty() && span > 0.0) {
    for (const RawRow& r : rows) {
      if (r.u + r.t > span) {
        fail(r.line, "accident + delay exceeds the horizon " + format_g17(span));
      }
    }
  }
  if (!errors.empty()) {
    std::string msg = "claims ingest failed (" + path + "):";
    for (const std::string& e : errors) msg += "\n  " + e;
    throw std::runtime_error(msg);
  }
  if (rows.empty()) throw std::runtime_error("claims file has no data rows: " + path);
  if (span <= 0.0) {
    throw std::runtime_error("cannot infer a positive horizon (all records at 0)");
  }

  ClaimDataset ds;
  ds.horizon = span;
  ds.unit_scale = 1.0;
  ds.records.reserve(rows.size());
  for (const RawRow& r : rows) ds.records.push_back({r.u, r.t, r.z});
  validate(ds);
  return normalize(ds);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

std::string density_csv(const DensityEstimate& estimate, double unit_scale) {
  std::string out = "t,value\n";
  for (std::size_t g = 0; g < estimate.grid_size(); ++g) {
    double t = estimate.grid_point(g) * unit_scale;
    double v = estimate.flags[g] ? std::numeric_limits<double>::quiet_NaN()
                                 : estimate.values[g] / unit_scale;
    out += format_g17(t);
    out += ',';
    out += format_g17(v);
    out += '\n';
  }
  return out;
}

std::string survival_csv(const SurvivalEstimate& survival, double unit_scale) {
  std::string out = "s,hazard_increment,survival\n";
  for (std::size_t i = 0; i < survival.times.size(); ++i) {
    out += format_g17(survival.times[i] * unit_scale);
    out += ',';
    out += format_g17(survival.increments[i]);
    out += ',';
    out += format_g17(survival.values[i]);
    out += '\n';
  }
  return out;
}

std::string scores_csv(const std::vector<ScoreRow>& rows) {
  std::string out = "target,h,score\n";
  for (const ScoreRow& r : rows) {
    out += r.target;
    out += ',';
    out += format_g17(r.h);
    out += ',';
    out += format_g17(r.score);
    out += '\n';
  }
  return out;
}

std::string triangle_csv(const BinnedTriangle& tri) {
  std::string out = "row,col,value\n";
  for (std::size_t r = 0; r < tri.m; ++r) {
    for (std::size_t s = 0; r + s < tri.m; ++s) {
      out += std::to_string(r);
      out += ',';
      out += std::to_string(s);
      out += ',';
      out += format_g17(tri.cells[r][s]);
      out += '\n';
    }
  }
  return out;
}

std::string matrix_csv(const std::vector<std::vector<double>>& cells) {
  std::string out = "row,col,value\n";
  for (std::size_t r = 0; r < cells.size(); ++r) {
    for (std::size_t s = 0; s < cells[r].size(); ++s) {
      out += std::to_string(r);
      out += ',';
      out += std::to_string(s);
      out += ',';
      out += format_g17(cells[r][s]);
      out += '\n';
    }
  }
  return out;
}

std::string claims_csv(const ClaimDataset& ds) {
  std::string out = "accident,delay,amount\n";
  for (const ClaimRecord& rec : ds.records) {
    out += format_g17(rec.u);
    out += ',';
    out += format_g17(rec.t);
    out += ',';
    out += format_g17(rec.z);
    out += '\n';
  }
  return out;
}

std::string micro_events_csv(const MicroEventLog& log) {
  std::string out =
      "policy,underwriting_day,type,brand,model,price,incident_type,"
      "incident_day,reporting_day,payment_day,amount\n";
  for (const MicroClaim& c : log.claims) {
    const MicroPolicy& p = log.policies[c.policy];
    out += std::to_string(c.policy);
    out += ',';
    out += std::to_string(p.underwriting_day);
    out += ',';
    out += std::to_string(static_cast<int>(p.type));
    out += ',';
    out += std::to_string(static_cast<int>(p.brand));
    out += ',';
    out += std::to_string(static_cast<int>(p.model));
    out += ',';
    out += format_g17(p.price);
    out += ',';
    out += std::to_string(static_cast<int>(c.incident_type));
    out += ',';
    out += std::to_string(c.incident_day);
    out += ',';
    out += std::to_string(c.reporting_day);
    out += ',';
    out += std::to_string(c.payment_day);
    out += ',';
    out += format_g17(c.amount);
    out += '\n';
  }
  return out;
}

std::string cashflow_csv(const std::vector<double>& amounts, double period_length) {
  std::string out = "period,start,end,amount\n";
  for (std::size_t p = 0; p < amounts.size(); ++p) {
    out += std::to_string(p + 1);
    out += ',';
    out += format_g17(static_cast<double>(p) * period_length);
    out += ',';
    out += format_g17(static_cast<double>(p + 1) * period_length);
    out += ',';
    out += format_g17(amounts[p]);
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json reserve_report_json(const ReserveReport& report,
                                           const nlohmann::ordered_json& bandwidths) {
  nlohmann::ordered_json j;
  j["total_paid"] = report.total_paid;
  j["fraction"] = report.fraction;
  j["reserve"] = report.reserve;
  j["cashflow_future"] = report.cashflow_future;
  j["cashflow_accident"] = report.cashflow_accident;
  j["method"] = report.method;
  j["bandwidths"] = bandwidths;
  j["period_length"] = report.period_length;
  return j;
}

std::string bench_runs_csv(const std::vector<BenchRunRow>& rows) {
  std::string out = "scenario,n,method,run,err2\n";
  for (const BenchRunRow& r : rows) {
    out += r.scenario;
    out += ',';
    out += std::to_string(r.n);
    out += ',';
    out += r.method;
    out += ',';
    out += std::to_string(r.run);
    out += ',';
    out += r.valid ? format_g17(r.err2) : std::string("invalid");
    out += '\n';
  }
  return out;
}

std::string bench_summary_csv(const std::vector<BenchSummaryRow>& rows) {
  std::string out = "scenario,n,method,median,mean,sd,invalid_count\n";
  for (const BenchSummaryRow& r : rows) {
    out += r.scenario;
    out += ',';
    out += std::to_string(r.n);
    out += ',';
    out += r.method;
    out += ',';
    out += format_g17(r.median);
    out += ',';
    out += format_g17(r.mean);
    out += ',';
    out += format_g17(r.sd);
    out += ',';
    out += std::to_string(r.invalid_count);
    out += '\n';
  }
  return out;
}

}  // namespace ccl
