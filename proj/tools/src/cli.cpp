#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gbl/errors.hpp"

namespace gbl::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

int line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Finds the line of a (possibly nested) key by scanning for each "key": in turn.
int locate(std::string_view text, const std::vector<std::string>& path) {
  std::size_t pos = 0;
  std::size_t found_at = std::string_view::npos;
  for (const auto& key : path) {
    const std::string quoted = "\"" + key + "\"";
    std::size_t at = text.find(quoted, pos);
    while (at != std::string_view::npos) {
      std::size_t after = at + quoted.size();
      while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) ++after;
      if (after < text.size() && text[after] == ':') break;
      at = text.find(quoted, at + 1);
    }
    if (at == std::string_view::npos) break;
    found_at = at;
    pos = at + quoted.size();
  }
  return found_at == std::string_view::npos ? 1 : line_of_offset(text, found_at);
}

std::string dotted(const std::vector<std::string>& path) {
  std::string out;
  for (const auto& p : path) {
    if (!out.empty()) out += '.';
    out += p;
  }
  return out;
}

class ConfigReader {
 public:
  ConfigReader(std::string_view text, fs::path base_dir, std::string origin)
      : text_(text), base_(std::move(base_dir)), origin_(std::move(origin)) {}

  [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& message) const {
    throw ConfigError(origin_ + ":" + std::to_string(locate(text_, path)) + ": " + dotted(path) + ": " + message);
  }

  void only_keys(const json& obj, const std::vector<std::string>& path, std::initializer_list<std::string_view> allowed) const {
    if (!obj.is_object()) fail(path, "must be an object");
    for (const auto& [key, value] : obj.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        auto p = path;
        p.push_back(key);
        fail(p, "unknown key");
      }
    }
  }

  double number(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_number()) fail(path, "must be a number");
    return v.get<double>();
  }

  std::int64_t integer(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_number_integer()) fail(path, "must be an integer");
    return v.get<std::int64_t>();
  }

  std::uint64_t unsigned_integer(const json& v, const std::vector<std::string>& path) const {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    fail(path, "must be a non-negative integer");
  }

  std::string string(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_string()) fail(path, "must be a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_array()) fail(path, "must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(number(x, path));
    return out;
  }

  const json& require(const json& obj, const std::string& key, const std::vector<std::string>& path) const {
    if (!obj.contains(key)) {
      auto p = path;
      p.push_back(key);
      fail(path.empty() ? p : path, "missing required key '" + key + "'");
    }
    return obj.at(key);
  }

  fs::path resolve_path(const std::string& p) const {
    const fs::path path(p);
    return path.is_absolute() ? path : base_ / path;
  }

  GraphSpec graph(const json& v) const {
    const std::vector<std::string> path{"graph"};
    try {
      if (v.is_string()) return load_graph_json(resolve_path(v.get<std::string>()));
      if (!v.is_object()) fail(path, "must be a file name or an object");
      if (v.contains("family")) {
        only_keys(v, path, {"family", "K", "edge_prob", "seed"});
        GraphRecipe recipe;
        const auto name = string(v.at("family"), {"graph", "family"});
        const auto family = parse_graph_family(name);
        if (!family) fail({"graph", "family"}, "unknown family '" + name + "'");
        recipe.family = *family;
        recipe.num_arms = static_cast<int>(integer(require(v, "K", path), {"graph", "K"}));
        if (v.contains("edge_prob")) recipe.edge_prob = number(v.at("edge_prob"), {"graph", "edge_prob"});
        if (v.contains("seed")) recipe.seed = unsigned_integer(v.at("seed"), {"graph", "seed"});
        return recipe;
      }
      return parse_graph_json(v.dump());
    } catch (const InputError& e) {
      fail(path, e.what());
    }
  }

  Environment environment(const json& v) const {
    const std::vector<std::string> path{"environment"};
    if (!v.is_object()) fail(path, "must be an object");
    const auto type = string(require(v, "type", path), {"environment", "type"});
    auto field = [](const char* key) { return std::vector<std::string>{"environment", key}; };
    try {
      if (type == "stochastic") {
        only_keys(v, path, {"type", "means", "law", "width"});
        RewardLaw law = RewardLaw::bernoulli;
        if (v.contains("law")) {
          const auto name = string(v.at("law"), field("law"));
          if (name == "uniform_pm") {
            law = RewardLaw::uniform_pm;
          } else if (name != "bernoulli") {
            fail(field("law"), "must be 'bernoulli' or 'uniform_pm'");
          }
        }
        const double width = v.contains("width") ? number(v.at("width"), field("width")) : 0.0;
        return StochasticEnv::make(numbers(require(v, "means", path), field("means")), law, width);
      }
      std::optional<std::uint64_t> seed;
      if (v.contains("seed")) seed = unsigned_integer(v.at("seed"), field("seed"));
      if (type == "table") {
        only_keys(v, path, {"type", "file"});
        return AdversarialEnv::from_table(load_table_csv(resolve_path(string(require(v, "file", path), field("file")))));
      }
      if (type == "mean_switch") {
        only_keys(v, path, {"type", "base_means", "switch_period", "seed"});
        return AdversarialEnv::mean_switch(numbers(require(v, "base_means", path), field("base_means")),
                                           integer(require(v, "switch_period", path), field("switch_period")), seed);
      }
      if (type == "drift") {
        only_keys(v, path, {"type", "base_means", "period", "amplitude", "seed"});
        const double amplitude = v.contains("amplitude") ? number(v.at("amplitude"), field("amplitude")) : 0.25;
        return AdversarialEnv::drift(numbers(require(v, "base_means", path), field("base_means")),
                                     integer(require(v, "period", path), field("period")), amplitude, seed);
      }
    } catch (const InputError& e) {
      fail(path, e.what());
    }
    fail(field("type"), "must be one of stochastic, table, mean_switch, drift");
  }

  ExperimentConfig read() const {
    json doc;
    try {
      doc = json::parse(text_);
    } catch (const json::parse_error& e) {
      throw ConfigError(origin_ + ":" + std::to_string(line_of_offset(text_, e.byte == 0 ? 0 : e.byte - 1)) +
                        ": invalid JSON: " + e.what());
    }
    only_keys(doc, {}, {"graph", "dominating_set", "policy", "environment", "horizon", "horizons", "delta", "seed",
                        "n_seeds", "trace_stride", "gamma_constant", "out_dir", "plot"});
    ExperimentConfig cfg;
    RunConfig& run = cfg.run;
    run.graph = graph(require(doc, "graph", {}));
    run.environment = environment(require(doc, "environment", {}));
    if (doc.contains("dominating_set")) {
      const auto& d = doc.at("dominating_set");
      if (d.is_string()) {
        if (d.get<std::string>() != "greedy") fail({"dominating_set"}, "must be \"greedy\" or a list of arms");
      } else if (d.is_array()) {
        std::vector<Arm> arms;
        for (const auto& a : d) arms.push_back(static_cast<Arm>(integer(a, {"dominating_set"})));
        run.dominating_set = arms;
      } else {
        fail({"dominating_set"}, "must be \"greedy\" or a list of arms");
      }
    }
    if (doc.contains("policy")) {
      const auto name = string(doc.at("policy"), {"policy"});
      const auto kind = parse_policy_kind(name);
      if (!kind) fail({"policy"}, "must be one of bobw, exp3g, uniform");
      run.policy = *kind;
    }
    if (doc.contains("horizon")) run.horizon = integer(doc.at("horizon"), {"horizon"});
    if (doc.contains("horizons")) {
      if (!doc.at("horizons").is_array()) fail({"horizons"}, "must be an array of integers");
      for (const auto& h : doc.at("horizons")) cfg.horizons.push_back(integer(h, {"horizons"}));
    }
    if (doc.contains("delta")) run.delta = number(doc.at("delta"), {"delta"});
    if (doc.contains("seed")) run.seed = unsigned_integer(doc.at("seed"), {"seed"});
    if (doc.contains("n_seeds")) {
      const auto n = integer(doc.at("n_seeds"), {"n_seeds"});
      if (n < 1 || n > 1000000) fail({"n_seeds"}, "must lie in 1..1000000");
      cfg.n_seeds = static_cast<int>(n);
    }
    if (doc.contains("trace_stride")) run.trace_stride = integer(doc.at("trace_stride"), {"trace_stride"});
    if (doc.contains("gamma_constant") && !doc.at("gamma_constant").is_null()) {
      run.gamma_constant = number(doc.at("gamma_constant"), {"gamma_constant"});
    }
    if (doc.contains("out_dir")) cfg.out_dir = resolve_path(string(doc.at("out_dir"), {"out_dir"}));
    if (doc.contains("plot")) {
      const auto& p = doc.at("plot");
      only_keys(p, {"plot"}, {"title", "svg"});
      if (p.contains("title")) cfg.plot.title = string(p.at("title"), {"plot", "title"});
      if (p.contains("svg")) {
        if (!p.at("svg").is_boolean()) fail({"plot", "svg"}, "must be true or false");
        cfg.plot.svg = p.at("svg").get<bool>();
      }
    }
    check(run);
    return cfg;
  }

  // Runs the harness validation and maps its "field: message" errors to lines.
  void check(const RunConfig& run) const {
    try {
      run.validate();
      resolve(run);
    } catch (const InputError& e) {
      const std::string message = e.what();
      const auto colon = message.find(':');
      static const std::vector<std::string> fields = {"horizon", "delta", "trace_stride", "gamma_constant",
                                                      "environment", "graph", "dominating_set"};
      if (colon != std::string::npos) {
        const auto field = message.substr(0, colon);
        if (std::find(fields.begin(), fields.end(), field) != fields.end()) {
          const auto rest = message.substr(colon + 1);
          fail({field}, rest.empty() ? rest : rest.substr(rest.front() == ' ' ? 1 : 0));
        }
      }
      // graph construction and dominating-set errors carry no field prefix
      const bool about_dom = message.find("dominating set") != std::string::npos;
      fail({about_dom && run.dominating_set ? "dominating_set" : "graph"}, message);
    } catch (const DomainError& e) {
      fail({"graph"}, e.what());
    }
  }

 private:
  std::string_view text_;
  fs::path base_;
  std::string origin_;
};

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string run_summary(const ExperimentConfig& cfg, const ResolvedRun& resolved, const AggregateRecord& agg) {
  std::ostringstream s;
  const auto& fin = agg.final_point();
  s << "policy: " << to_string(cfg.run.policy) << '\n';
  s << "arms: " << resolved.graph.num_arms() << '\n';
  s << "edges: " << resolved.graph.num_edges() << '\n';
  s << "dominating set:";
  for (Arm j : resolved.dom.members()) s << ' ' << j;
  s << " (size " << resolved.dom.size() << ")\n";
  s << "environment: " << (is_stochastic(resolved.environment) ? "stochastic" : "adversarial") << '\n';
  s << "horizon: " << cfg.run.horizon << '\n';
  s << "seeds: " << cfg.n_seeds << " starting at " << cfg.run.seed << '\n';
  s << "final regret mean: " << fmt(fin.mean, "%.6g") << '\n';
  s << "final regret std: " << fmt(fin.std, "%.6g") << '\n';
  s << "final regret q05: " << fmt(fin.q05, "%.6g") << '\n';
  s << "final regret q95: " << fmt(fin.q95, "%.6g") << '\n';
  int detections = 0;
  std::vector<double> pulls(static_cast<std::size_t>(resolved.graph.num_arms()), 0.0);
  for (const auto& r : agg.runs) {
    if (r.detect_round) ++detections;
    for (std::size_t i = 0; i < pulls.size(); ++i) pulls[i] += static_cast<double>(r.pull_counts[i]);
  }
  s << "detections: " << detections << " of " << agg.runs.size() << '\n';
  s << "mean pulls:";
  for (double p : pulls) s << ' ' << fmt(p / static_cast<double>(agg.runs.size()), "%.6g");
  s << '\n';
  return s.str();
}

std::string events_document(const AggregateRecord& agg) {
  // each entry is the per-run events object with its seed prepended
  std::string out = "[";
  for (std::size_t i = 0; i < agg.runs.size(); ++i) {
    if (i) out += ",";
    const std::string inner = events_json(agg.runs[i]);
    out += "{\"seed\":" + std::to_string(agg.runs[i].seed) + "," + inner.substr(1);
  }
  out += "]\n";
  return out;
}

std::string single_or_aggregate_csv(const AggregateRecord& agg) {
  return agg.runs.size() == 1 ? trace_csv(agg.runs.front()) : trace_csv(agg);
}

std::optional<int> refuse_clobber(const std::vector<fs::path>& targets, const CommonFlags& flags, Streams io) {
  if (flags.force) return std::nullopt;
  for (const auto& t : targets) {
    if (fs::exists(t)) {
      io.err << "error: " << t.string() << " already exists (pass --force to overwrite)\n";
      return kUsage;
    }
  }
  return std::nullopt;
}

struct Loaded {
  ExperimentConfig cfg;
  fs::path out_dir;
};

std::variant<Loaded, int> load_for_command(const fs::path& config_path, const std::optional<fs::path>& out_dir,
                                           const CommonFlags& flags, Streams io) {
  try {
    Loaded l{load_experiment(config_path), {}};
    if (flags.seed) {
      l.cfg.run.seed = *flags.seed;
      // a different seed can change a generated graph; revalidate
      l.cfg.run.validate();
      resolve(l.cfg.run);
    }
    if (out_dir) {
      l.out_dir = *out_dir;
    } else if (l.cfg.out_dir) {
      l.out_dir = *l.cfg.out_dir;
    } else {
      l.out_dir = config_path.parent_path() / "out";
    }
    return l;
  } catch (const ConfigError& e) {
    io.err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    io.err << "error: " << config_path.string() << ": " << e.what() << '\n';
  }
  return kUsage;
}


std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<double> nice_ticks(double lo, double hi) {
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double v = std::ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) ticks.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
  return ticks;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

ExperimentConfig parse_experiment(std::string_view text, const std::filesystem::path& base_dir,
                                  const std::string& origin) {
  return ConfigReader(text, base_dir, origin).read();
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  const auto text = read_file(path);
  if (!text) throw ConfigError(path.string() + ": cannot read config file");
  return parse_experiment(*text, path.parent_path(), path.string());
}

int cmd_run(const std::filesystem::path& config_path, const std::optional<std::filesystem::path>& out_dir,
            const CommonFlags& flags, Streams io) {
  auto loaded = load_for_command(config_path, out_dir, flags, io);
  if (std::holds_alternative<int>(loaded)) return std::get<int>(loaded);
  auto& [cfg, dir] = std::get<Loaded>(loaded);
  std::vector<fs::path> targets = {dir / "trace.csv", dir / "events.json", dir / "summary.txt"};
  if (cfg.plot.svg) targets.push_back(dir / "regret.svg");
  if (auto rc = refuse_clobber(targets, flags, io)) return *rc;

  try {
    const auto start = std::chrono::steady_clock::now();
    const ResolvedRun resolved = resolve(cfg.run);
    const AggregateRecord agg = run_replicated(cfg.run, cfg.n_seeds);
    const std::string summary = run_summary(cfg, resolved, agg);
    fs::create_directories(dir);
    const std::string csv = single_or_aggregate_csv(agg);
    write_file(targets[0], csv);
    write_file(targets[1], events_document(agg));
    write_file(targets[2], summary);
    if (cfg.plot.svg) {
      const auto title = cfg.plot.title.empty() ? config_path.stem().string() : cfg.plot.title;
      write_file(targets[3], render_svg(parse_trace_csv(csv, targets[0].string()), title));
    }
    if (!flags.quiet) {
      io.out << summary;
      io.err << "wrote " << dir.string() << " in "
             << fmt(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), "%.3f") << " s\n";
    }
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kOk;
}

int cmd_sweep(const std::filesystem::path& config_path, const std::vector<std::int64_t>& horizons,
              const std::optional<std::filesystem::path>& out_dir, const CommonFlags& flags, Streams io) {
  auto loaded = load_for_command(config_path, out_dir, flags, io);
  if (std::holds_alternative<int>(loaded)) return std::get<int>(loaded);
  auto& [cfg, dir] = std::get<Loaded>(loaded);
  const std::vector<std::int64_t> hs = horizons.empty() ? cfg.horizons : horizons;
  if (hs.empty()) {
    io.err << "error: no horizons given (use --horizons or the config's \"horizons\" key)\n";
    return kUsage;
  }
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (hs[i] < 1 || (i > 0 && hs[i] <= hs[i - 1])) {
      io.err << "error: horizons must be positive and strictly increasing\n";
      return kUsage;
    }
  }
  std::vector<fs::path> targets = {dir / "sweep.csv"};
  for (auto h : hs) targets.push_back(dir / ("trace_T" + std::to_string(h) + ".csv"));
  if (auto rc = refuse_clobber(targets, flags, io)) return *rc;

  for (auto h : hs) {
    RunConfig probe = cfg.run;
    probe.horizon = h;
    try {
      probe.validate();
    } catch (const InputError& e) {
      io.err << "error: " << config_path.string() << ": horizon " << h << ": " << e.what() << '\n';
      return kUsage;
    }
  }

  try {
    std::string summary = "T,mean_regret,std\n";
    std::vector<std::string> traces;
    for (auto h : hs) {
      RunConfig run = cfg.run;
      run.horizon = h;
      const auto start = std::chrono::steady_clock::now();
      const auto agg = run_replicated(run, cfg.n_seeds);
      summary += std::to_string(h) + "," + format_number(agg.final_point().mean) + "," +
                 format_number(agg.final_point().std) + "\n";
      traces.push_back(single_or_aggregate_csv(agg));
      if (!flags.quiet) {
        io.err << "T=" << h << " done in "
               << fmt(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), "%.3f") << " s\n";
      }
    }
    fs::create_directories(dir);
    write_file(targets[0], summary);
    for (std::size_t i = 0; i < traces.size(); ++i) write_file(targets[i + 1], traces[i]);
    if (!flags.quiet) io.out << summary;
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kOk;
}

std::vector<TraceRow> parse_trace_csv(std::string_view text, const std::string& origin) {
  auto fail = [&](int line, const std::string& msg) -> void {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
  };
  std::vector<TraceRow> rows;
  std::size_t pos = 0;
  int line_no = 0;
  std::size_t columns = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line == "round,regret") {
        columns = 2;
      } else if (line == "round,regret_mean,regret_std,regret_q05,regret_q95") {
        columns = 5;
      } else {
        fail(1, "unrecognized header '" + std::string(line) + "'");
      }
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cells.size() != columns) {
      fail(line_no, "expected " + std::to_string(columns) + " fields, got " + std::to_string(cells.size()));
    }
    TraceRow row;
    if (!parse_number(cells[0], row.round) || row.round < 1) fail(line_no, "round must be a positive integer");
    std::vector<double> values(columns - 1);
    for (std::size_t c = 1; c < columns; ++c) {
      if (!parse_number(cells[c], values[c - 1]) || !std::isfinite(values[c - 1])) {
        fail(line_no, "field " + std::to_string(c + 1) + " is not a finite number");
      }
    }
    row.value = values[0];
    if (columns == 5) {
      row.q05 = values[2];
      row.q95 = values[3];
    }
    if (!rows.empty() && row.round <= rows.back().round) fail(line_no, "rounds must increase");
    rows.push_back(row);
  }
  if (line_no == 0) fail(1, "empty file");
  if (rows.empty()) fail(line_no, "no data rows");
  return rows;
}

std::string render_svg(const std::vector<TraceRow>& rows, const std::string& title) {
  constexpr double width = 720, height = 440, left = 80, right = 24, top = 44, bottom = 56;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const bool band = rows.front().q05.has_value();

  double x_max = static_cast<double>(rows.back().round);
  double y_min = 0.0;
  double y_max = 0.0;
  for (const auto& r : rows) {
    y_min = std::min({y_min, r.value, r.q05.value_or(r.value)});
    y_max = std::max({y_max, r.value, r.q95.value_or(r.value)});
  }
  if (y_max - y_min <= 0.0) y_max = y_min + 1.0;
  const auto y_ticks = nice_ticks(y_min, y_max);
  const auto x_ticks = nice_ticks(0.0, x_max);
  y_min = std::min(y_min, y_ticks.front());
  y_max = std::max(y_max, y_ticks.back());

  auto sx = [&](double x) { return left + x / x_max * plot_w; };
  auto sy = [&](double y) { return top + (y_max - y) / (y_max - y_min) * plot_h; };

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"720\" height=\"440\" "
       "viewBox=\"0 0 720 440\" font-family=\"sans-serif\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"720\" height=\"440\" fill=\"white\"/>\n";
  s << "<text x=\"" << fmt(width / 2) << "\" y=\"26\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(title)
    << "</text>\n";
  s << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (double t : y_ticks) {
    s << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(sy(t)) << "\" x2=\"" << fmt(left + plot_w) << "\" y2=\""
      << fmt(sy(t)) << "\"/>\n";
  }
  s << "</g>\n";
  if (band) {
    s << "<path class=\"band\" fill=\"#4477aa\" fill-opacity=\"0.25\" stroke=\"none\" d=\"";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      s << (i ? " L " : "M ") << fmt(sx(static_cast<double>(rows[i].round))) << ' ' << fmt(sy(*rows[i].q95));
    }
    for (std::size_t i = rows.size(); i-- > 0;) {
      s << " L " << fmt(sx(static_cast<double>(rows[i].round))) << ' ' << fmt(sy(*rows[i].q05));
    }
    s << " Z\"/>\n";
  }
  s << "<polyline class=\"regret\" fill=\"none\" stroke=\"#224488\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    s << (i ? " " : "") << fmt(sx(static_cast<double>(rows[i].round))) << ',' << fmt(sy(rows[i].value));
  }
  s << "\"/>\n";
  s << "<g stroke=\"black\" stroke-width=\"1\">\n";
  s << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top + plot_h) << "\" x2=\"" << fmt(left + plot_w) << "\" y2=\""
    << fmt(top + plot_h) << "\"/>\n";
  s << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(left) << "\" y2=\""
    << fmt(top + plot_h) << "\"/>\n";
  for (double t : x_ticks) {
    s << "<line x1=\"" << fmt(sx(t)) << "\" y1=\"" << fmt(top + plot_h) << "\" x2=\"" << fmt(sx(t)) << "\" y2=\""
      << fmt(top + plot_h + 5) << "\"/>\n";
  }
  for (double t : y_ticks) {
    s << "<line x1=\"" << fmt(left - 5) << "\" y1=\"" << fmt(sy(t)) << "\" x2=\"" << fmt(left) << "\" y2=\""
      << fmt(sy(t)) << "\"/>\n";
  }
  s << "</g>\n<g font-size=\"11\">\n";
  for (double t : x_ticks) {
    s << "<text x=\"" << fmt(sx(t)) << "\" y=\"" << fmt(top + plot_h + 18) << "\" text-anchor=\"middle\">"
      << fmt(t, "%g") << "</text>\n";
  }
  for (double t : y_ticks) {
    s << "<text x=\"" << fmt(left - 8) << "\" y=\"" << fmt(sy(t) + 4) << "\" text-anchor=\"end\">" << fmt(t, "%g")
      << "</text>\n";
  }
  s << "</g>\n";
  s << "<text x=\"" << fmt(left + plot_w / 2) << "\" y=\"" << fmt(height - 14)
    << "\" text-anchor=\"middle\" font-size=\"12\">round</text>\n";
  s << "<text x=\"18\" y=\"" << fmt(top + plot_h / 2) << "\" text-anchor=\"middle\" font-size=\"12\" "
    << "transform=\"rotate(-90 18 " << fmt(top + plot_h / 2) << ")\">" << (band ? "mean regret" : "regret")
    << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

int cmd_plot(const std::filesystem::path& trace_path, const std::filesystem::path& svg_path,
             const std::optional<std::string>& title, const CommonFlags& flags, Streams io) {
  const auto text = read_file(trace_path);
  if (!text) {
    io.err << "error: cannot read " << trace_path.string() << '\n';
    return kUsage;
  }
  std::vector<TraceRow> rows;
  try {
    rows = parse_trace_csv(*text, trace_path.string());
  } catch (const ConfigError& e) {
    io.err << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (auto rc = refuse_clobber({svg_path}, flags, io)) return *rc;
  std::string heading = title.value_or(trace_path.stem().string());
  if (!title && rows.front().q05) heading += " (mean, q05 to q95 band)";
  try {
    if (svg_path.has_parent_path()) fs::create_directories(svg_path.parent_path());
    write_file(svg_path, render_svg(rows, heading));
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  if (!flags.quiet) io.err << "wrote " << svg_path.string() << '\n';
  return kOk;
}

int cmd_graph_info(const std::string& spec, const CommonFlags& flags, Streams io) {
  std::optional<FeedbackGraph> graph;
  try {
    if (fs::exists(spec)) {
      graph = load_graph_json(spec);
    } else {
      std::vector<std::string> parts;
      std::stringstream ss(spec);
      for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
      if (parts.size() < 2 || parts.size() > 3) {
        throw InputError("graph spec must be a JSON file or family:K[:edge_prob], got '" + spec + "'");
      }
      const auto family = parse_graph_family(parts[0]);
      if (!family) throw InputError("unknown graph family '" + parts[0] + "'");
      int k = 0;
      if (!parse_number(parts[1], k)) throw InputError("K must be an integer, got '" + parts[1] + "'");
      std::optional<double> p;
      if (parts.size() == 3) {
        double v = 0;
        if (!parse_number(parts[2], v)) throw InputError("edge_prob must be a number, got '" + parts[2] + "'");
        p = v;
      }
      graph = make_graph(*family, k, p, flags.seed.value_or(0));
    }
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << '\n';
    return kUsage;
  }
  io.out << "K: " << graph->num_arms() << '\n';
  io.out << "|E|: " << graph->num_edges() << '\n';
  const auto uncovered = unobservable_arms(*graph);
  if (!uncovered.empty()) {
    io.out << "observability: NOT OBSERVABLE\n";
    io.out << "uncovered arms:";
    for (Arm i : uncovered) io.out << ' ' << i;
    io.out << '\n';
    return kOk;
  }
  io.out << "observability: observable\n";
  const auto dom = greedy_dominating_set(*graph);
  io.out << "greedy dominating set:";
  for (Arm j : dom.members()) io.out << ' ' << j;
  io.out << '\n';
  io.out << "dominating set size: " << dom.size() << '\n';
  return kOk;
}

}  // namespace gbl::cli
