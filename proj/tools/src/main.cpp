#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"

int main(int argc, char** argv) {
  namespace cli = gbl::cli;
  CLI::App app{"gbl: online learning with graph feedback (elimination with adversary detection, Exp3.G, uniform)"};
  app.require_subcommand(1);
  app.footer(
      "Environment:\n"
      "  GBL_THREADS   maximum number of replications run concurrently\n"
      "                (default: hardware concurrency)\n\n"
      "Exit status: 0 success, 1 runtime failure, 2 invalid input or refused overwrite");

  cli::CommonFlags flags;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Override the config seed (graph-info: seed for random graphs)");
  app.add_flag("--force", flags.force, "Overwrite existing output files");
  app.add_flag("--quiet", flags.quiet, "Suppress the summary and progress messages");

  std::string config;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Run seeded replications of one experiment config");
  run->add_option("config", config, "Experiment config (JSON)")->required();
  auto* run_out = run->add_option("--out", out_dir, "Output directory (default: config out_dir, else <config dir>/out)");
  run->fallthrough();

  std::vector<std::int64_t> horizons;
  auto* sweep = app.add_subcommand("sweep", "Run one experiment at several horizons; writes sweep.csv (T,mean_regret,std)");
  sweep->add_option("config", config, "Experiment config (JSON)")->required();
  sweep->add_option("--horizons", horizons, "Strictly increasing horizons, comma separated (default: config horizons)")
      ->delimiter(',');
  auto* sweep_out = sweep->add_option("--out", out_dir, "Output directory");
  sweep->fallthrough();

  std::string trace;
  std::string svg;
  std::string title;
  auto* plot = app.add_subcommand("plot", "Render a trace CSV as a standalone SVG line chart");
  plot->add_option("trace", trace, "Trace CSV written by run or sweep")->required();
  plot->add_option("svg", svg, "Output SVG path")->required();
  auto* title_opt = plot->add_option("--title", title, "Chart title (default: trace file name)");
  plot->fallthrough();

  std::string spec;
  auto* info = app.add_subcommand("graph-info", "Print K, |E|, observability and the greedy dominating set");
  info->add_option("graph", spec, "Graph JSON file, or family:K[:edge_prob] with family in bandit, clique_loops, bar, "
                                  "loopless_cycle, random_observable")
      ->required();
  info->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? cli::kOk : cli::kUsage;
  }
  if (seed_opt->count() > 0) flags.seed = seed;

  const cli::Streams io{std::cout, std::cerr};
  auto out = [&](CLI::Option* opt) -> std::optional<std::filesystem::path> {
    if (opt->count() == 0) return std::nullopt;
    return std::filesystem::path(out_dir);
  };
  if (*run) return cli::cmd_run(config, out(run_out), flags, io);
  if (*sweep) return cli::cmd_sweep(config, horizons, out(sweep_out), flags, io);
  if (*plot) {
    return cli::cmd_plot(trace, svg, title_opt->count() ? std::optional<std::string>(title) : std::nullopt, flags, io);
  }
  return cli::cmd_graph_info(spec, flags, io);
}
