#include "gbl/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gbl/errors.hpp"
#include "gbl/rng.hpp"

namespace gbl {

FeedbackGraph::FeedbackGraph(int num_arms, std::vector<Edge> edges)
    : num_arms_(num_arms), edges_(std::move(edges)) {
  if (num_arms_ < 1) throw InputError("graph needs at least one arm, got K=" + std::to_string(num_arms_));
  const auto k = static_cast<std::size_t>(num_arms_);
  out_.resize(k);
  in_.resize(k);
  adjacency_.assign(k * k, 0);
  for (const Edge& e : edges_) {
    if (e.from < 1 || e.from > num_arms_ || e.to < 1 || e.to > num_arms_) {
      throw InputError("edge (" + std::to_string(e.from) + ", " + std::to_string(e.to) +
                       ") has an endpoint outside 1.." + std::to_string(num_arms_));
    }
    auto& cell = adjacency_[static_cast<std::size_t>(e.from - 1) * k + static_cast<std::size_t>(e.to - 1)];
    if (cell) {
      throw InputError("duplicate edge (" + std::to_string(e.from) + ", " + std::to_string(e.to) + ")");
    }
    cell = 1;
  }
  std::sort(edges_.begin(), edges_.end());
  for (const Edge& e : edges_) {
    out_[static_cast<std::size_t>(e.from - 1)].push_back(e.to);
    in_[static_cast<std::size_t>(e.to - 1)].push_back(e.from);
  }
  for (auto& v : in_) std::sort(v.begin(), v.end());
}

void FeedbackGraph::check_arm(Arm i) const {
  if (i < 1 || i > num_arms_) {
    throw InputError("arm " + std::to_string(i) + " outside 1.." + std::to_string(num_arms_));
  }
}

std::span<const Arm> FeedbackGraph::out_neighbors(Arm i) const {
  check_arm(i);
  return out_[static_cast<std::size_t>(i - 1)];
}

std::span<const Arm> FeedbackGraph::in_neighbors(Arm i) const {
  check_arm(i);
  return in_[static_cast<std::size_t>(i - 1)];
}

bool FeedbackGraph::has_edge(Arm from, Arm to) const {
  check_arm(from);
  check_arm(to);
  const auto k = static_cast<std::size_t>(num_arms_);
  return adjacency_[static_cast<std::size_t>(from - 1) * k + static_cast<std::size_t>(to - 1)] != 0;
}

std::vector<Arm> unobservable_arms(const FeedbackGraph& g) {
  std::vector<Arm> out;
  for (Arm i = 1; i <= g.num_arms(); ++i) {
    if (g.in_neighbors(i).empty()) out.push_back(i);
  }
  return out;
}

bool is_observable(const FeedbackGraph& g) { return unobservable_arms(g).empty(); }

bool covers_all_arms(const FeedbackGraph& g, std::span<const Arm> members) {
  std::vector<char> covered(static_cast<std::size_t>(g.num_arms()), 0);
  for (Arm j : members) {
    for (Arm i : g.out_neighbors(j)) covered[static_cast<std::size_t>(i - 1)] = 1;
  }
  return std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; });
}

DominatingSet::DominatingSet(const FeedbackGraph& g, std::vector<Arm> members)
    : members_(std::move(members)) {
  std::vector<char> seen(static_cast<std::size_t>(g.num_arms()), 0);
  for (Arm j : members_) {
    if (j < 1 || j > g.num_arms()) {
      throw InputError("dominating set member " + std::to_string(j) + " outside 1.." +
                       std::to_string(g.num_arms()));
    }
    if (seen[static_cast<std::size_t>(j - 1)]++) {
      throw InputError("dominating set repeats arm " + std::to_string(j));
    }
  }
  if (!covers_all_arms(g, members_)) {
    throw InputError("arms do not form a dominating set: their out-neighborhoods miss some arm");
  }
}

bool DominatingSet::contains(Arm a) const {
  return std::find(members_.begin(), members_.end(), a) != members_.end();
}

DominatingSet greedy_dominating_set(const FeedbackGraph& g) {
  if (auto bad = unobservable_arms(g); !bad.empty()) {
    throw DomainError("graph is not observable: arm " + std::to_string(bad.front()) +
                      " has no in-neighbor and cannot be covered");
  }
  const auto k = static_cast<std::size_t>(g.num_arms());
  std::vector<char> covered(k, 0);
  std::size_t remaining = k;
  std::vector<Arm> members;
  while (remaining > 0) {
    Arm best = 0;
    std::size_t best_gain = 0;
    for (Arm j = 1; j <= g.num_arms(); ++j) {
      std::size_t gain = 0;
      for (Arm i : g.out_neighbors(j)) gain += covered[static_cast<std::size_t>(i - 1)] ? 0 : 1;
      if (gain > best_gain) {
        best_gain = gain;
        best = j;
      }
    }
    if (best == 0) throw InternalError("greedy cover stalled on an observable graph");
    members.push_back(best);
    for (Arm i : g.out_neighbors(best)) {
      auto& c = covered[static_cast<std::size_t>(i - 1)];
      if (!c) {
        c = 1;
        --remaining;
      }
    }
  }
  return DominatingSet(g, std::move(members));
}

std::optional<GraphFamily> parse_graph_family(std::string_view name) {
  if (name == "bandit") return GraphFamily::bandit;
  if (name == "clique_loops") return GraphFamily::clique_loops;
  if (name == "bar") return GraphFamily::bar;
  if (name == "loopless_cycle") return GraphFamily::loopless_cycle;
  if (name == "random_observable") return GraphFamily::random_observable;
  return std::nullopt;
}

std::string_view to_string(GraphFamily family) {
  switch (family) {
    case GraphFamily::bandit: return "bandit";
    case GraphFamily::clique_loops: return "clique_loops";
    case GraphFamily::bar: return "bar";
    case GraphFamily::loopless_cycle: return "loopless_cycle";
    case GraphFamily::random_observable: return "random_observable";
  }
  return "unknown";
}

FeedbackGraph make_graph(GraphFamily family, int num_arms, std::optional<double> edge_prob,
                         std::optional<std::uint64_t> seed) {
  if (num_arms < 2) throw InputError("graph families need K >= 2, got " + std::to_string(num_arms));
  std::vector<Edge> edges;
  switch (family) {
    case GraphFamily::bandit:
      for (Arm i = 1; i <= num_arms; ++i) edges.push_back({i, i});
      break;
    case GraphFamily::clique_loops:
      for (Arm i = 1; i <= num_arms; ++i)
        for (Arm j = 1; j <= num_arms; ++j) edges.push_back({i, j});
      break;
    case GraphFamily::bar:
      if (num_arms % 2 != 0) throw InputError("bar graph needs even K, got " + std::to_string(num_arms));
      for (Arm i = 1; i < num_arms; i += 2) {
        edges.push_back({i, i + 1});
        edges.push_back({i + 1, i});
      }
      break;
    case GraphFamily::loopless_cycle:
      for (Arm i = 1; i <= num_arms; ++i) edges.push_back({i, (i % num_arms) + 1});
      break;
    case GraphFamily::random_observable: {
      if (!edge_prob || !(*edge_prob > 0.0 && *edge_prob <= 1.0)) {
        throw InputError("random_observable needs edge_prob in (0, 1]");
      }
      if (!seed) throw InputError("random_observable needs a seed");
      CounterRng rng = make_rng(*seed).substream("graph");
      const auto k = static_cast<std::size_t>(num_arms);
      std::vector<char> has_in(k, 0);
      for (Arm i = 1; i <= num_arms; ++i) {
        for (Arm j = 1; j <= num_arms; ++j) {
          if (i == j) continue;
          if (rng.uniform() < *edge_prob) {
            edges.push_back({i, j});
            has_in[static_cast<std::size_t>(j - 1)] = 1;
          }
        }
      }
      for (Arm j = 1; j <= num_arms; ++j) {
        if (has_in[static_cast<std::size_t>(j - 1)]) continue;
        // uniform over the K-1 other arms
        auto pick = static_cast<Arm>(rng.uniform() * (num_arms - 1)) + 1;
        if (pick >= j) ++pick;
        edges.push_back({pick, j});
      }
      break;
    }
  }
  return FeedbackGraph(num_arms, std::move(edges));
}

FeedbackGraph parse_graph_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("graph JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("graph JSON: top level must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "K" && key != "edges") throw InputError("graph JSON: unknown key '" + key + "'");
  }
  if (!doc.contains("K") || !doc["K"].is_number_integer()) throw InputError("graph JSON: 'K' must be an integer");
  if (!doc.contains("edges") || !doc["edges"].is_array()) throw InputError("graph JSON: 'edges' must be an array");
  std::vector<Edge> edges;
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw InputError("graph JSON: each edge must be a pair of integers, got " + e.dump());
    }
    edges.push_back({e[0].get<Arm>(), e[1].get<Arm>()});
  }
  return FeedbackGraph(doc["K"].get<int>(), std::move(edges));
}

FeedbackGraph load_graph_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_graph_json(buf.str());
}

std::string graph_to_json(const FeedbackGraph& g) {
  nlohmann::json doc;
  doc["K"] = g.num_arms();
  doc["edges"] = nlohmann::json::array();
  for (const Edge& e : g.edges()) doc["edges"].push_back({e.from, e.to});
  return doc.dump();
}

}  // namespace gbl
