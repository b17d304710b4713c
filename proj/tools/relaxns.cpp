#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "relaxns/app.hpp"

namespace {

using relaxns::RunConfig;

struct Options {
  std::string config;
  std::string out;
  std::optional<int> workers;
  std::optional<int> order;
};

RunConfig load(const Options& o) {
  RunConfig cfg = relaxns::parse_config(relaxns::read_text_file(o.config));
  if (o.order) {
    if (*o.order != 1 && *o.order != 2) throw relaxns::ConfigError("--order must be 1 or 2");
    cfg.sim.order = *o.order;
  }
  if (!o.out.empty()) cfg.output = o.out;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relaxed compressible Navier-Stokes-Fourier solver and blow-up diagnostics"};
  app.require_subcommand(1);
  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "Run configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "Output directory (overrides run.output)");
    sub->add_option("--order", opt.order, "Scheme order, 1 or 2");
  };
  auto* simulate = app.add_subcommand("simulate", "Run one simulation");
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  auto* thresholds = app.add_subcommand("thresholds", "Report the blow-up thresholds for the initial data");
  auto* hyper = app.add_subcommand("hyperbolicity-check", "Characteristic speeds of the initial field");
  auto* limit = app.add_subcommand("limit-study", "Relaxed vs classical gap as tau decreases");
  auto* preview = app.add_subcommand("init-preview", "Sample the initial field and check admissibility");
  for (auto* s : {simulate, sweep, thresholds, hyper, limit, preview}) add_common(s);
  sweep->add_option("--workers", opt.workers, "Concurrent runs (default: RELAXNS_WORKERS or run.workers)");

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = load(opt);
    const std::filesystem::path out = cfg.output;
    if (*simulate) return relaxns::cmd_simulate(cfg, out, std::cout);
    if (*sweep) return relaxns::cmd_sweep(cfg, out, relaxns::resolve_workers(opt.workers, cfg), std::cout);
    if (*thresholds) {
      std::optional<std::filesystem::path> dir;
      if (!opt.out.empty()) dir = out;
      return relaxns::cmd_thresholds(cfg, dir ? &*dir : nullptr, std::cout);
    }
    if (*hyper) return relaxns::cmd_hyperbolicity_check(cfg, out, std::cout);
    if (*limit) return relaxns::cmd_limit_study(cfg, out, std::cout);
    if (*preview) return relaxns::cmd_init_preview(cfg, out, std::cout);
  } catch (const relaxns::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return relaxns::exit_code::config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return relaxns::exit_code::runtime_error;
  }
  return relaxns::exit_code::completed;
}
