#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ccl/config.hpp"
#include "ccl/pipeline.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::int64_t seed = -1;  // < 0: keep the config's seed
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON run configuration")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts.seed, "override the config's root seed");
  cmd->add_option("--out", opts.out_dir, "output directory (created if missing)");
}

ccl::RunConfig load(const CommonOpts& opts) {
  ccl::RunConfig cfg = ccl::load_config(opts.config_path);
  if (opts.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opts.seed);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ccl: outstanding-liability estimation from individual claim records\n"
      "(cost-weighted survival and density estimators, chain ladder, "
      "simulators, benchmarks)"};
  app.require_subcommand(1);

  CommonOpts estimate_opts, reserve_opts, simulate_opts, bench_opts, diagnose_opts;
  CLI::App* estimate =
      app.add_subcommand("estimate", "densities, survival and bandwidth scores");
  add_common(estimate, estimate_opts);
  CLI::App* reserve =
      app.add_subcommand("reserve", "reserve report with cash-flow tables");
  add_common(reserve, reserve_opts);
  CLI::App* simulate =
      app.add_subcommand("simulate", "write simulated claim data");
  add_common(simulate, simulate_opts);
  CLI::App* bench =
      app.add_subcommand("bench", "simulation benchmarks against ground truth");
  add_common(bench, bench_opts);
  CLI::App* diagnose =
      app.add_subcommand("diagnose", "independence and multiplicativity checks");
  add_common(diagnose, diagnose_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    ccl::PipelineResult result;
    if (estimate->parsed()) {
      result = ccl::run_estimate(load(estimate_opts), estimate_opts.out_dir);
    } else if (reserve->parsed()) {
      result = ccl::run_reserve(load(reserve_opts), reserve_opts.out_dir);
    } else if (simulate->parsed()) {
      result = ccl::run_simulate(load(simulate_opts), simulate_opts.out_dir);
    } else if (bench->parsed()) {
      result = ccl::run_bench(load(bench_opts), bench_opts.out_dir);
    } else if (diagnose->parsed()) {
      result = ccl::run_diagnose(load(diagnose_opts), diagnose_opts.out_dir);
    }
    for (const std::string& f : result.files) std::cout << f << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
