#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gbl {

// Arms are numbered 1..K everywhere in the public API and in every file format.
using Arm = int;

struct Edge {
  Arm from = 0;
  Arm to = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Directed feedback graph: edge (i, j) means pulling i reveals j's reward.
// Immutable once built; neighbor lists are sorted ascending.
class FeedbackGraph {
 public:
  // Throws InputError on K < 1, endpoints outside 1..K, or duplicate edges.
  FeedbackGraph(int num_arms, std::vector<Edge> edges);

  [[nodiscard]] int num_arms() const { return num_arms_; }
  [[nodiscard]] std::size_t num_edges() const { return edges_.size(); }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }

  [[nodiscard]] std::span<const Arm> out_neighbors(Arm i) const;
  [[nodiscard]] std::span<const Arm> in_neighbors(Arm i) const;
  [[nodiscard]] bool has_edge(Arm from, Arm to) const;

  friend bool operator==(const FeedbackGraph& a, const FeedbackGraph& b) {
    return a.num_arms_ == b.num_arms_ && a.edges_ == b.edges_;
  }

 private:
  void check_arm(Arm i) const;

  int num_arms_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Arm>> out_;
  std::vector<std::vector<Arm>> in_;
  std::vector<std::uint8_t> adjacency_;
};

// True iff every arm has at least one in-neighbor.
bool is_observable(const FeedbackGraph& g);
// Arms with an empty in-neighborhood, ascending.
std::vector<Arm> unobservable_arms(const FeedbackGraph& g);

// Arms whose out-neighborhoods jointly cover 1..K.
class DominatingSet {
 public:
  // Throws InputError when members repeat, fall outside 1..K, or do not cover.
  DominatingSet(const FeedbackGraph& g, std::vector<Arm> members);

  [[nodiscard]] const std::vector<Arm>& members() const { return members_; }
  [[nodiscard]] std::size_t size() const { return members_.size(); }
  [[nodiscard]] bool contains(Arm a) const;

  friend bool operator==(const DominatingSet&, const DominatingSet&) = default;

 private:
  std::vector<Arm> members_;
};

bool covers_all_arms(const FeedbackGraph& g, std::span<const Arm> members);

// Greedy set cover over out-neighborhoods; picks the arm covering the most
// still-uncovered arms, smallest index on ties. Throws DomainError naming an
// uncoverable arm when the graph is not observable.
DominatingSet greedy_dominating_set(const FeedbackGraph& g);

enum class GraphFamily { bandit, clique_loops, bar, loopless_cycle, random_observable };

std::optional<GraphFamily> parse_graph_family(std::string_view name);
std::string_view to_string(GraphFamily family);

FeedbackGraph make_graph(GraphFamily family, int num_arms,
                         std::optional<double> edge_prob = std::nullopt,
                         std::optional<std::uint64_t> seed = std::nullopt);

// {"K": int, "edges": [[i, j], ...]}, 1-indexed.
FeedbackGraph parse_graph_json(std::string_view text);
FeedbackGraph load_graph_json(const std::filesystem::path& path);
std::string graph_to_json(const FeedbackGraph& g);

}  // namespace gbl
