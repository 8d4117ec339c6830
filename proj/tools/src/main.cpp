#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <lavrentiev/error.hpp>

#include "commands.hpp"

using namespace lavrentiev;
using namespace lavrentiev::cli;

int main(int argc, char** argv) {
  CLI::App app{"Lavrentiev regularization studies"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides overrides;
  bool verbose = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config,-c", config_path, "TOML configuration file")->required();
    sub->add_option("--n", overrides.n, "grid size override");
    sub->add_option("--seed", overrides.seed, "first noise seed");
    sub->add_option("--delta0", overrides.delta0, "largest noise level");
    sub->add_option("--out,-o", overrides.out, "CSV output path (default: stdout)");
    sub->add_flag("-v,--verbose", verbose, "per-cell diagnostics on stderr");
  };

  CLI::App* rates = app.add_subcommand("rates", "convergence rate study for one parameter rule");
  CLI::App* rules = app.add_subcommand("rules", "a priori, discrepancy and Lepskii rules on the same data");
  CLI::App* distance = app.add_subcommand("distance", "distance function and the rate it predicts");
  CLI::App* vsc = app.add_subcommand("vsc", "empirical variational source condition check");
  CLI::App* fracpow = app.add_subcommand("fracpow", "fractional power by Dunford integral vs Riemann-Liouville");
  for (CLI::App* sub : {rates, rules, distance, vsc, fracpow}) add_common(sub);
  CLI::App* selftest = app.add_subcommand("selftest", "run the acceptance criteria");
  selftest->add_flag("-v,--verbose", verbose, "print each criterion as it finishes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  CommandContext ctx{verbose, &std::cout, &std::cerr};
  try {
    if (selftest->parsed()) return cmd_selftest(ctx);
    RunConfig cfg = parse_config(config_path);
    apply_overrides(cfg, overrides);
    if (rates->parsed()) return cmd_rates(cfg, ctx);
    if (rules->parsed()) return cmd_rules(cfg, ctx);
    if (distance->parsed()) return cmd_distance(cfg, ctx);
    if (vsc->parsed()) return cmd_vsc(cfg, ctx);
    return cmd_fracpow(cfg, ctx);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << " (last residual " << e.last_residual() << ")\n";
    return exit_solver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_check_failed;
  }
}
