#include "ccl/pipeline.hpp"

#include <array>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "ccl/bandwidth.hpp"
#include "ccl/density.hpp"
#include "ccl/diagnostics.hpp"
#include "ccl/io.hpp"
#include "ccl/metrics.hpp"
#include "ccl/parallel.hpp"
#include "ccl/reserving.hpp"
#include "ccl/rng.hpp"
#include "ccl/simulator.hpp"
#include "ccl/survival.hpp"
#include "ccl/triangle.hpp"

namespace ccl {

namespace {

namespace fs = std::filesystem;

template <typename Fn>
auto with_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("[") + stage + "] " + e.what());
  }
}

std::string out_path(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  return (fs::path(dir) / name).string();
}

ClaimDataset ingest_stage(const RunConfig& cfg) {
  if (cfg.input.empty()) {
    throw std::runtime_error("config requires `input` for this command");
  }
  return ingest_claims(cfg.input, cfg.horizon, cfg.start_date);
}

int degree_of(EstimatorKind kind) {
  return kind == EstimatorKind::local_linear ? 1 : 0;
}

nlohmann::ordered_json spec_json(const BandwidthSpec& spec) {
  nlohmann::ordered_json j;
  switch (spec.mode) {
    case BandwidthMode::fixed:
      j["mode"] = "fixed";
      j["h"] = spec.h;
      break;
    case BandwidthMode::cv:
      j["mode"] = "cv";
      j["selected"] = spec.selected;
      break;
    case BandwidthMode::piecewise: {
      j["mode"] = "piecewise";
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const BandwidthPiece& p : spec.pieces) {
        arr.push_back({{"from", p.from}, {"to", p.to}, {"h", p.h}});
      }
      j["pieces"] = arr;
      break;
    }
  }
  return j;
}

struct DensityStage {
  SurvivalEstimate survival;  // reversed-time product limit for the delays
  CostDensityResult t;
  CostDensityResult u;
};

DensityStage density_stage(const ClaimDataset& ds, const RunConfig& cfg) {
  DensityStage st;
  int deg = degree_of(cfg.estimator);
  st.survival = with_stage("survival", [&] { return km_weighted(ds); });
  st.t = with_stage("density T", [&] {
    return estimate_cost_density(ds, DensityTarget::delay, deg, cfg.bandwidth_t,
                                 cfg.grid_size);
  });
  st.u = with_stage("density U", [&] {
    return estimate_cost_density(ds, DensityTarget::accident, deg,
                                 cfg.bandwidth_u, cfg.grid_size);
  });
  return st;
}

std::vector<ScoreRow> collect_scores(const DensityStage& st) {
  std::vector<ScoreRow> rows;
  for (const CvEntry& e : st.t.cv.table) rows.push_back({"T", e.h, e.score});
  for (const CvEntry& e : st.u.cv.table) rows.push_back({"U", e.h, e.score});
  return rows;
}

// Natural-time estimate from an engine already built on the (possibly
// role-swapped) dataset: natural point tn maps to reversed point 1 - tn.
DensityEstimate natural_estimate(const DensityEngine& eng, double h, int degree,
                                 std::size_t grid) {
  DensityEstimate est;
  est.orientation = TimeOrientation::natural;
  est.degree = degree;
  est.values.resize(grid);
  est.flags.resize(grid);
  for (std::size_t g = 0; g < grid; ++g) {
    double tn = static_cast<double>(g) / static_cast<double>(grid - 1);
    DensityEngine::Value v = eng.at(1.0 - tn, h, degree);
    est.values[g] = v.defined ? v.value : 0.0;
    est.flags[g] = v.defined ? 0 : 1;
  }
  return est;
}

// Oracle bandwidth for the simulation study: the candidate minimizing the
// integrated squared error against the known truth (ties toward larger h).
DensityEstimate pick_by_ise(const DensityEngine& eng,
                            const std::function<double(double)>& truth,
                            std::size_t n, int degree, std::size_t grid) {
  std::vector<double> candidates = default_candidate_grid(n);
  double best = std::numeric_limits<double>::infinity();
  DensityEstimate best_est;
  for (double h : candidates) {
    DensityEstimate est = natural_estimate(eng, h, degree, grid);
    double score = ise(est, truth);
    if (score <= best) {
      best = score;
      best_est = std::move(est);
    }
  }
  return best_est;
}

}  // namespace

PipelineResult run_estimate(const RunConfig& cfg, const std::string& out_dir) {
  PipelineResult res;
  ClaimDataset ds = with_stage("ingest", [&] { return ingest_stage(cfg); });

  if (cfg.estimator == EstimatorKind::chain_ladder) {
    BinnedTriangle tri = with_stage("triangle", [&] {
      return aggregate_triangle(ds, cfg.triangle_bins, /*amounts=*/true);
    });
    ChainLadderResult clf =
        with_stage("chain-ladder", [&] { return chain_ladder_forecast(tri); });
    std::string p1 = out_path(out_dir, "triangle.csv");
    write_file(p1, triangle_csv(tri));
    res.files.push_back(p1);
    std::string p2 = out_path(out_dir, "completed.csv");
    write_file(p2, matrix_csv(clf.completed));
    res.files.push_back(p2);
    return res;
  }

  DensityStage st = density_stage(ds, cfg);
  std::string pt = out_path(out_dir, "density_T.csv");
  write_file(pt, density_csv(st.t.density, ds.unit_scale));
  res.files.push_back(pt);
  std::string pu = out_path(out_dir, "density_U.csv");
  write_file(pu, density_csv(st.u.density, ds.unit_scale));
  res.files.push_back(pu);
  std::string ps = out_path(out_dir, "survival.csv");
  write_file(ps, survival_csv(st.survival, ds.unit_scale));
  res.files.push_back(ps);
  std::string pc = out_path(out_dir, "scores.csv");
  write_file(pc, scores_csv(collect_scores(st)));
  res.files.push_back(pc);
  return res;
}

PipelineResult run_reserve(const RunConfig& cfg, const std::string& out_dir) {
  PipelineResult res;
  ClaimDataset ds = with_stage("ingest", [&] { return ingest_stage(cfg); });

  double period = cfg.period_length > 0.0 ? cfg.period_length : ds.unit_scale / 10.0;
  double delta = period / ds.unit_scale;
  if (delta > 1.0 + 1e-12) {
    throw std::runtime_error("[reserve] period length exceeds the horizon");
  }
  delta = std::min(delta, 1.0);

  ReserveReport report;
  nlohmann::ordered_json bandwidths;
  if (cfg.estimator == EstimatorKind::chain_ladder) {
    BinnedTriangle tri = with_stage("triangle", [&] {
      return aggregate_triangle(ds, cfg.triangle_bins, /*amounts=*/true);
    });
    ChainLadderResult clf =
        with_stage("chain-ladder", [&] { return chain_ladder_forecast(tri); });
    report = with_stage("reserve", [&] {
      return reserve_report_from_forecast(clf, delta, ds.unit_scale);
    });
    bandwidths = nullptr;
  } else {
    DensityStage st = density_stage(ds, cfg);
    report = with_stage("reserve", [&] {
      return reserve_estimate(ds, st.t.density, st.u.density,
                              estimator_label(cfg.estimator), delta);
    });
    bandwidths["T"] = spec_json(st.t.spec);
    bandwidths["U"] = spec_json(st.u.spec);
  }

  std::string pj = out_path(out_dir, "report.json");
  write_file(pj, reserve_report_json(report, bandwidths).dump(2) + "\n");
  res.files.push_back(pj);
  std::string pf = out_path(out_dir, "cashflow_future.csv");
  write_file(pf, cashflow_csv(report.cashflow_future, report.period_length));
  res.files.push_back(pf);
  std::string pa = out_path(out_dir, "cashflow_accident.csv");
  write_file(pa, cashflow_csv(report.cashflow_accident, report.period_length));
  res.files.push_back(pa);
  return res;
}

PipelineResult run_simulate(const RunConfig& cfg, const std::string& out_dir) {
  PipelineResult res;
  bool any = false;
  if (cfg.scenario) {
    any = true;
    const ScenarioBenchConfig& sc = *cfg.scenario;
    std::string truths = "scenario,true_fraction\n";
    for (int id : sc.ids) {
      double frac = with_stage("scenario truth", [&] {
        return true_reserve_fraction(ScenarioSpec::from_id(id, 1, 0));
      });
      truths += std::to_string(id) + "," + format_g17(frac) + "\n";
      for (std::size_t n : sc.sizes) {
        ClaimDataset d = with_stage("scenario simulate", [&] {
          return simulate_scenario(ScenarioSpec::from_id(id, n, cfg.seed));
        });
        std::string p = out_path(out_dir, "scenario" + std::to_string(id) + "_n" +
                                              std::to_string(n) + ".csv");
        write_file(p, claims_csv(d));
        res.files.push_back(p);
      }
    }
    std::string pt = out_path(out_dir, "scenario_truths.csv");
    write_file(pt, truths);
    res.files.push_back(pt);
  }
  if (cfg.micro) {
    any = true;
    MicroEventLog log = with_stage("micro simulate", [&] {
      return simulate_micro(cfg.seed, cfg.micro->underwriting_days);
    });
    std::string p = out_path(out_dir, "micro_events.csv");
    write_file(p, micro_events_csv(log));
    res.files.push_back(p);
  }
  if (!any) {
    throw std::runtime_error(
        "[simulate] config requires a `scenario` or `micro` block");
  }
  return res;
}

namespace {

struct CellOutcome {
  bool valid = false;
  double err2 = 0.0;
};

void scenario_bench(const RunConfig& cfg, const std::string& out_dir,
                    PipelineResult& res) {
  const ScenarioBenchConfig& sc = *cfg.scenario;
  static constexpr std::array<const char*, 3> kMethods = {"LL", "LC", "CL"};

  std::vector<BenchRunRow> rows;
  std::vector<BenchSummaryRow> summary;

  for (int id : sc.ids) {
    ScenarioTruth truth = scenario_truth(ScenarioSpec::from_id(id, 1, 0));
    double frac_true =
        true_reserve_fraction(truth.weighted_f_t, truth.weighted_f_u);

    for (std::size_t n : sc.sizes) {
      std::vector<std::array<CellOutcome, 3>> out(sc.runs);
      parallel_for(
          sc.runs,
          [&](std::size_t run) {
            ScenarioSpec spec = ScenarioSpec::from_id(
                id, n, mix64(cfg.seed ^ mix64(0xbe9cULL + run)));
            ClaimDataset ds = simulate_scenario(spec);
            double zsum = 0.0;
            for (const ClaimRecord& rec : ds.records) zsum += rec.z;
            double r_true = frac_true * zsum;

            SurvivalEstimate surv_t = km_weighted(ds);
            ClaimDataset swapped = swap_time_roles(ds);
            SurvivalEstimate surv_u = km_weighted(swapped);
            DensityEngine eng_t(ds, surv_t);
            DensityEngine eng_u(swapped, surv_u);

            for (int m = 0; m < 2; ++m) {
              int degree = m == 0 ? 1 : 0;
              try {
                DensityEstimate dt, du;
                if (sc.bandwidth_rule == "ise") {
                  dt = pick_by_ise(eng_t, truth.weighted_f_t, n, degree,
                                   cfg.grid_size);
                  du = pick_by_ise(eng_u, truth.weighted_f_u, n, degree,
                                   cfg.grid_size);
                } else {
                  CvResult cv_t = select_bandwidth(
                      ds, surv_t, default_candidate_grid(ds.size()), degree);
                  dt = natural_estimate(eng_t, cv_t.selected, degree,
                                        cfg.grid_size);
                  CvResult cv_u = select_bandwidth(
                      swapped, surv_u, default_candidate_grid(ds.size()), degree);
                  du = natural_estimate(eng_u, cv_u.selected, degree,
                                        cfg.grid_size);
                }
                double fr = reserve_fraction(GridDensity::from_estimate(dt),
                                             GridDensity::from_estimate(du));
                out[run][m] = {true,
                               squared_relative_error(fr * zsum, r_true)};
              } catch (const std::exception&) {
                out[run][m] = {false, 0.0};
              }
            }
            try {
              BinnedTriangle tri =
                  aggregate_triangle(ds, sc.triangle_bins, /*amounts=*/true);
              ChainLadderResult clf = chain_ladder_forecast(tri);
              out[run][2] = {true,
                             squared_relative_error(clf.reserve, r_true)};
            } catch (const std::exception&) {
              out[run][2] = {false, 0.0};
            }
          },
          cfg.threads);

      for (std::size_t m = 0; m < kMethods.size(); ++m) {
        std::vector<double> valid;
        std::size_t invalid = 0;
        for (std::size_t run = 0; run < sc.runs; ++run) {
          rows.push_back({std::to_string(id), n, kMethods[m], run,
                          out[run][m].valid, out[run][m].err2});
          if (out[run][m].valid) {
            valid.push_back(out[run][m].err2);
          } else {
            ++invalid;
          }
        }
        BenchSummaryRow s;
        s.scenario = std::to_string(id);
        s.n = n;
        s.method = kMethods[m];
        s.invalid_count = invalid;
        if (!valid.empty()) {
          SampleStats st = sample_stats(valid);
          s.median = st.median;
          s.mean = st.mean;
          s.sd = st.sd;
        } else {
          s.median = s.mean = s.sd = std::numeric_limits<double>::quiet_NaN();
        }
        summary.push_back(s);
      }
    }
  }

  std::string pr = out_path(out_dir, "bench_runs.csv");
  write_file(pr, bench_runs_csv(rows));
  res.files.push_back(pr);
  std::string psum = out_path(out_dir, "bench_summary.csv");
  write_file(psum, bench_summary_csv(summary));
  res.files.push_back(psum);
}

void micro_bench(const RunConfig& cfg, const std::string& out_dir,
                 PipelineResult& res) {
  const MicroBenchConfig& mb = *cfg.micro;
  static constexpr std::array<const char*, 3> kMethods = {"LL", "LC", "CL"};
  std::vector<std::int32_t> dates =
      mb.valuation_days.empty() ? default_micro_valuation_days() : mb.valuation_days;
  for (std::int32_t v : dates) {
    if (v % mb.month_days != 0) {
      throw std::runtime_error(
          "[bench] valuation day " + std::to_string(v) +
          " is not a multiple of month_days (chain ladder needs aligned bins)");
    }
  }

  struct DateOutcome {
    std::array<bool, 3> valid = {false, false, false};
    std::array<double, 3> est = {0.0, 0.0, 0.0};
    double truth = 0.0;
  };
  std::vector<std::vector<DateOutcome>> out(
      mb.runs, std::vector<DateOutcome>(dates.size()));

  parallel_for(
      mb.runs,
      [&](std::size_t run) {
        MicroEventLog log = simulate_micro(
            mix64(cfg.seed ^ mix64(0x3ac9ULL + run)), mb.underwriting_days);
        for (std::size_t di = 0; di < dates.size(); ++di) {
          std::int32_t v = dates[di];
          DateOutcome& slot = out[run][di];
          MicroSnapshot snap;
          try {
            snap = micro_snapshot(log, v);
          } catch (const std::exception&) {
            continue;  // all methods invalid for this date
          }
          slot.truth = snap.true_outstanding;
          ClaimDataset ds = normalize(snap.dataset);
          double zsum = 0.0;
          for (const ClaimRecord& rec : ds.records) zsum += rec.z;

          double ht = std::min(mb.bandwidth_t_days / static_cast<double>(v), 1.0);
          double hu = std::min(mb.bandwidth_u_days / static_cast<double>(v), 1.0);
          try {
            SurvivalEstimate surv_t = km_weighted(ds);
            ClaimDataset swapped = swap_time_roles(ds);
            SurvivalEstimate surv_u = km_weighted(swapped);
            DensityEngine eng_t(ds, surv_t);
            DensityEngine eng_u(swapped, surv_u);
            for (int m = 0; m < 2; ++m) {
              int degree = m == 0 ? 1 : 0;
              try {
                DensityEstimate dt = natural_estimate(eng_t, ht, degree, cfg.grid_size);
                DensityEstimate du = natural_estimate(eng_u, hu, degree, cfg.grid_size);
                double fr = reserve_fraction(GridDensity::from_estimate(dt),
                                             GridDensity::from_estimate(du));
                slot.est[m] = fr * zsum;
                slot.valid[m] = true;
              } catch (const std::exception&) {
              }
            }
          } catch (const std::exception&) {
            // survival construction failed (e.g. no payments yet)
          }
          try {
            std::size_t bins = static_cast<std::size_t>(v / mb.month_days);
            BinnedTriangle tri = aggregate_triangle(ds, bins, /*amounts=*/true);
            ChainLadderResult clf = chain_ladder_forecast(tri);
            slot.est[2] = clf.reserve;
            slot.valid[2] = true;
          } catch (const std::exception&) {
          }
        }
      },
      cfg.threads);

  std::string runs_out = "valuation_day,run,method,estimate,truth\n";
  for (std::size_t di = 0; di < dates.size(); ++di) {
    for (std::size_t run = 0; run < mb.runs; ++run) {
      const DateOutcome& slot = out[run][di];
      for (std::size_t m = 0; m < kMethods.size(); ++m) {
        runs_out += std::to_string(dates[di]);
        runs_out += ',';
        runs_out += std::to_string(run);
        runs_out += ',';
        runs_out += kMethods[m];
        runs_out += ',';
        runs_out += slot.valid[m] ? format_g17(slot.est[m]) : std::string("invalid");
        runs_out += ',';
        runs_out += format_g17(slot.truth);
        runs_out += '\n';
      }
    }
  }

  std::string mse_out = "valuation_day,method,mse,invalid_count\n";
  for (std::size_t di = 0; di < dates.size(); ++di) {
    for (std::size_t m = 0; m < kMethods.size(); ++m) {
      std::vector<double> est, truths;
      std::size_t invalid = 0;
      for (std::size_t run = 0; run < mb.runs; ++run) {
        const DateOutcome& slot = out[run][di];
        if (slot.valid[m]) {
          est.push_back(slot.est[m]);
          truths.push_back(slot.truth);
        } else {
          ++invalid;
        }
      }
      double value = est.empty() ? std::numeric_limits<double>::quiet_NaN()
                                 : mse(est, truths);
      mse_out += std::to_string(dates[di]);
      mse_out += ',';
      mse_out += kMethods[m];
      mse_out += ',';
      mse_out += format_g17(value);
      mse_out += ',';
      mse_out += std::to_string(invalid);
      mse_out += '\n';
    }
  }

  std::string p1 = out_path(out_dir, "micro_runs.csv");
  write_file(p1, runs_out);
  res.files.push_back(p1);
  std::string p2 = out_path(out_dir, "micro_mse.csv");
  write_file(p2, mse_out);
  res.files.push_back(p2);
}

}  // namespace

PipelineResult run_bench(const RunConfig& cfg, const std::string& out_dir) {
  PipelineResult res;
  if (!cfg.scenario && !cfg.micro) {
    throw std::runtime_error(
        "[bench] config requires a `scenario` or `micro` block");
  }
  if (cfg.scenario) scenario_bench(cfg, out_dir, res);
  if (cfg.micro) micro_bench(cfg, out_dir, res);
  return res;
}

PipelineResult run_diagnose(const RunConfig& cfg, const std::string& out_dir) {
  PipelineResult res;
  ClaimDataset ds = with_stage("ingest", [&] { return ingest_stage(cfg); });
  const DiagnoseConfig& dg = cfg.diagnose;

  DiagnosticsReport ind = with_stage("independence", [&] {
    return independence_diagnostic(ds, dg.bins, dg.s_lo, dg.s_hi);
  });
  DiagnosticsReport mult = with_stage("multiplicativity", [&] {
    return multiplicativity_diagnostic(ds, dg.bins, dg.grid_size);
  });

  std::string ind_csv = "s,rows,slope,intercept,t_stat,p_value\n";
  for (const IndependenceRow& row : ind.independence) {
    ind_csv += std::to_string(row.s);
    ind_csv += ',';
    ind_csv += std::to_string(row.rows_used);
    ind_csv += ',';
    ind_csv += format_g17(row.slope);
    ind_csv += ',';
    ind_csv += format_g17(row.intercept);
    ind_csv += ',';
    ind_csv += format_g17(row.t_stat);
    ind_csv += ',';
    ind_csv += format_g17(row.p_value);
    ind_csv += '\n';
  }

  std::string mult_csv = "quarter,t,value\n";
  for (const QuarterCurve& q : mult.quarters) {
    if (q.degenerate) continue;
    for (std::size_t g = 0; g < q.grid_values.size(); ++g) {
      double t = static_cast<double>(g) / static_cast<double>(q.grid_values.size() - 1);
      mult_csv += std::to_string(q.quarter);
      mult_csv += ',';
      mult_csv += format_g17(t);
      mult_csv += ',';
      mult_csv += format_g17(q.grid_values[g]);
      mult_csv += '\n';
    }
  }

  nlohmann::ordered_json j;
  j["max_sup_distance"] = mult.max_sup_distance;
  nlohmann::ordered_json quarters = nlohmann::ordered_json::array();
  for (const QuarterCurve& q : mult.quarters) {
    quarters.push_back({{"quarter", q.quarter},
                        {"points", q.t.size()},
                        {"mean_cost", q.c},
                        {"degenerate", q.degenerate}});
  }
  j["quarters"] = quarters;
  nlohmann::ordered_json indep = nlohmann::ordered_json::array();
  for (const IndependenceRow& row : ind.independence) {
    indep.push_back({{"s", row.s},
                     {"rows", row.rows_used},
                     {"slope", row.slope},
                     {"t_stat", row.t_stat},
                     {"p_value", row.p_value}});
  }
  j["independence"] = indep;

  std::string p1 = out_path(out_dir, "independence.csv");
  write_file(p1, ind_csv);
  res.files.push_back(p1);
  std::string p2 = out_path(out_dir, "multiplicativity.csv");
  write_file(p2, mult_csv);
  res.files.push_back(p2);
  std::string p3 = out_path(out_dir, "diagnostics.json");
  write_file(p3, j.dump(2) + "\n");
  res.files.push_back(p3);
  return res;
}

}  // namespace ccl
