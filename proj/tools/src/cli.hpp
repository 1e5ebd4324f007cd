#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gbl/harness.hpp"

namespace gbl::cli {

// Exit statuses shared by every command.
inline constexpr int kOk = 0;
inline constexpr int kRuntimeFailure = 1;
inline constexpr int kUsage = 2;

// Thrown for malformed configs; what() already carries "file:line: field: ...".
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PlotOptions {
  std::string title;
  bool svg = false;  // also render regret.svg next to the trace
};

struct ExperimentConfig {
  RunConfig run;
  int n_seeds = 1;
  std::vector<std::int64_t> horizons;  // sweep only
  std::optional<std::filesystem::path> out_dir;
  PlotOptions plot;
};

ExperimentConfig parse_experiment(std::string_view text, const std::filesystem::path& base_dir,
                                  const std::string& origin);
ExperimentConfig load_experiment(const std::filesystem::path& path);

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  bool force = false;
  bool quiet = false;
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

int cmd_run(const std::filesystem::path& config_path, const std::optional<std::filesystem::path>& out_dir,
            const CommonFlags& flags, Streams io);
int cmd_sweep(const std::filesystem::path& config_path, const std::vector<std::int64_t>& horizons,
              const std::optional<std::filesystem::path>& out_dir, const CommonFlags& flags, Streams io);
int cmd_plot(const std::filesystem::path& trace_path, const std::filesystem::path& svg_path,
             const std::optional<std::string>& title, const CommonFlags& flags, Streams io);
// spec: a graph JSON file, or family:K[:edge_prob] (random graphs take --seed).
int cmd_graph_info(const std::string& spec, const CommonFlags& flags, Streams io);

struct TraceRow {
  std::int64_t round = 0;
  double value = 0.0;
  std::optional<double> q05;
  std::optional<double> q95;
};

// Reads either trace layout; throws ConfigError naming the offending line.
std::vector<TraceRow> parse_trace_csv(std::string_view text, const std::string& origin);
std::string render_svg(const std::vector<TraceRow>& rows, const std::string& title);

}  // namespace gbl::cli
