#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "tsorder/cli.hpp"

using tsorder::RunConfig;

namespace {

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--grid-points", cfg.grid_points,
                  "evaluation grid size (8..8192)");
  cmd->add_option("--tol", cfg.tol, "decision tolerance");
  cmd->add_option("--seed", cfg.seed, "rng seed");
  cmd->add_option("--out", cfg.out, "output path (default stdout)");
  cmd->add_option("--format", cfg.format, "csv or json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice transform and stochastic order toolkit"};
  app.require_subcommand(0, 1);

  RunConfig cfg;
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file");

  auto* transform = app.add_subcommand("transform", "evaluate a transform on the grid");
  transform->add_option("--x", cfg.x, "distribution spec")->required();
  transform->add_option("--kind", cfg.kind,
                        "laplace|lstar|lstarstar|psi|derivative|fractional|pmf");
  transform->add_option("--i", cfg.i, "derivative order");
  transform->add_option("--gamma", cfg.gamma, "fractional order");
  add_common(transform, cfg);

  auto* order = app.add_subcommand("order-check", "decide a stochastic order");
  order->add_option("--relation", cfg.relation,
                    "Lt|Lt-r|r-Lt-r|d-Lt-r|D-Lt-r|D-gamma-Lt-r|st|hr|rh|lr")
      ->required();
  order->add_option("--x", cfg.x, "distribution spec")->required();
  order->add_option("--y", cfg.y, "distribution spec")->required();
  order->add_option("--i", cfg.i, "derivative order for d/D relations");
  order->add_option("--gamma", cfg.gamma, "fractional order");
  add_common(order, cfg);

  auto* ospdf = app.add_subcommand("os-pdf", "order-statistic density curve");
  ospdf->add_option("--i", cfg.i, "order-statistic index")->required();
  ospdf->add_option("--size", cfg.size, "sample-size distribution")->required();
  ospdf->add_option("--parent", cfg.parent, "parent distribution");
  ospdf->add_option("--points", cfg.curve_points, "curve points");
  add_common(ospdf, cfg);

  auto* fospdf = app.add_subcommand("fos-pdf",
                                    "fractional order-statistic density curve");
  fospdf->add_option("--gamma", cfg.gamma, "fractional index")->required();
  fospdf->add_option("--size", cfg.size, "sample-size distribution")->required();
  fospdf->add_option("--parent", cfg.parent, "parent distribution");
  fospdf->add_option("--points", cfg.curve_points, "curve points");
  add_common(fospdf, cfg);

  auto* sim = app.add_subcommand("simulate", "monte carlo histograms");
  sim->add_option("--kind", cfg.kind, "os|fos|compound")->required();
  sim->add_option("--i", cfg.i, "order-statistic index");
  sim->add_option("--gamma", cfg.gamma, "fractional index");
  sim->add_option("--size", cfg.size, "sample-size distribution");
  sim->add_option("--x", cfg.x, "summand distribution (compound)");
  sim->add_option("--parent", cfg.parent, "parent distribution");
  sim->add_option("--reps", cfg.replications, "replications");
  sim->add_option("--bins", cfg.bins, "histogram bins");
  sim->add_flag("--strict", cfg.strict, "condition on {N >= i+1}");
  add_common(sim, cfg);

  auto* verify = app.add_subcommand("verify", "run implication suites");
  verify->add_option("--theorem", cfg.theorem, "suite id or 'all'");
  verify->add_option("--battery", cfg.battery, "battery name");
  verify->add_option("--reps", cfg.replications, "replications");
  add_common(verify, cfg);

  auto* battery = app.add_subcommand("battery", "order-check battery report");
  add_common(battery, cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "cannot open config " << config_path << "\n";
        return tsorder::kExitBadConfig;
      }
      nlohmann::json j = nlohmann::json::parse(in);
      return tsorder::run(RunConfig::from_json(j));
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return tsorder::kExitBadConfig;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.validate();
    return tsorder::run(cfg);
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "config parse error: " << e.what() << "\n";
    return tsorder::kExitBadConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "bad config: " << e.what() << "\n";
    return tsorder::kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return tsorder::kExitError;
  }
}
