#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "dynleiden/graph.hpp"

namespace dynleiden {

/// One hierarchy level: supergraph G^p, community map f^p, sub-community map
/// s^p (a vertex id of level p+1, or a top-level label at the last level) and
/// root map g^p.
struct LevelState {
  Graph graph;
  std::vector<CommunityId> f;
  std::vector<VertexId> s;
  std::vector<VertexId> g;
};

struct Hierarchy {
  std::vector<LevelState> levels;
  double gamma = 1.0;
  /// One past the largest community id in use at any level.
  CommunityId next_community = 0;

  std::size_t num_levels() const { return levels.size(); }
  /// Final base-level membership g^1.
  const std::vector<VertexId>& membership() const { return levels.front().g; }
};

/// Wall time spent in each phase, summed over levels.
struct PhaseTimes {
  double movement_ms = 0.0;
  double refinement_ms = 0.0;
  double aggregation_ms = 0.0;
};

struct LeidenOptions {
  std::size_t levels = 10;
  double gamma = 1.0;
};

/// Moves vertices between communities until no move has positive gain.
/// The queue starts with every vertex in ascending id order. Fresh communities
/// take ids from next_community. Returns the vertices whose community changed,
/// ascending.
std::vector<VertexId> move_phase(LevelState& level, double gamma, CommunityId& next_community);

/// Splits every community into connected sub-communities by greedy singleton
/// merging in ascending (degree, id) order. Sets level.s to dense ids numbered
/// by first appearance in ascending vertex order; returns their count.
std::size_t refine_phase(LevelState& level, double gamma);

/// Builds level p+1 from level p: one supervertex per sub-community,
/// superedges summing member weights, internal weight as a self-loop, and
/// f^{p+1} inherited from the members.
LevelState aggregate_phase(const LevelState& level);

/// Aggregate graph of g under the sub-community map s (ids 0..k-1).
Graph aggregate_graph(const Graph& g, const std::vector<VertexId>& s, std::size_t k);

/// Static Leiden over `options.levels` levels. initial is a membership over
/// V (relabelled densely); empty means singletons. Each f^p is left as the
/// movement phase of its level produced it; g^p is the composed s-chain, so
/// membership() is the final partition. Phase times are added to *times when given.
Hierarchy run_leiden(const Graph& g, const std::vector<CommunityId>& initial,
                     const LeidenOptions& options = {}, PhaseTimes* times = nullptr);
inline Hierarchy run_leiden(const Graph& g, const LeidenOptions& options = {}) {
  return run_leiden(g, {}, options);
}

/// Recomputes g^P = s^P and g^p = g^{p+1} ∘ s^p.
void compose_roots(Hierarchy& h);

/// Sets f^p(v) = f^{p+1}(s^p(v)) from the top level down.
void sync_communities(Hierarchy& h);

/// JSON snapshot with per-level f, s, g and edge lists.
std::string hierarchy_to_json(const Hierarchy& h);
/// Inverse of hierarchy_to_json. Graphs are rebuilt from the edge lists;
/// a level without "g" gets it recomposed.
Hierarchy hierarchy_from_json(const std::string& text);

}  // namespace dynleiden
