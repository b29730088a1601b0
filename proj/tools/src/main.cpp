#include <CLI11.hpp>
#include <iostream>

#include "conelef_cli/commands.hpp"

namespace cli = conelef::cli;

int main(int argc, char** argv) {
  CLI::App app{"L2-Lefschetz numbers of maps on manifolds with conical singularities", "cone-lefschetz"};
  app.require_subcommand(1);

  std::string config_path;
  cli::CliOptions opts;
  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", config_path, "problem configuration (JSON)");
    if (config_required) c->required();
    sub->add_option("--extension", opts.extension, "closed extension: max, min or both")
        ->check(CLI::IsMember({"max", "min", "both"}));
    sub->add_option("--t-min", opts.t_min, "smallest heat time of the sweep grid");
    sub->add_option("--t-max", opts.t_max, "largest heat time of the sweep grid");
    sub->add_option("--points", opts.points, "number of grid points");
    sub->add_option("--seed", opts.seed, "seed for randomized checks");
    sub->add_option("--format", opts.format, "output format: csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", opts.output, "output file");
    sub->add_flag("--quiet", opts.quiet, "suppress the human-readable output");
  };
  auto* compute = app.add_subcommand("compute", "assemble the Lefschetz numbers and write report.json");
  auto* sweep = app.add_subcommand("sweep", "tabulate heat traces over a t grid");
  auto* verify = app.add_subcommand("verify", "run the verification checks");
  add_common(compute, true);
  add_common(sweep, true);
  add_common(verify, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitUsage;
  }

  return cli::guarded(
      [&]() -> int {
        std::optional<cli::ProblemConfig> config;
        if (!config_path.empty()) config = cli::load_config(config_path);
        if (compute->parsed()) return cli::cmd_compute(*config, opts, std::cout, std::cerr);
        if (sweep->parsed()) return cli::cmd_sweep(*config, opts, std::cout, std::cerr);
        return cli::cmd_verify(config, opts, std::cout, std::cerr);
      },
      std::cerr);
}
