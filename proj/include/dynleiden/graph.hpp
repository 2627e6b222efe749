#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace dynleiden {

using VertexId = std::uint32_t;
using CommunityId = std::uint32_t;
using Weight = double;

inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();
inline constexpr CommunityId kNoCommunity = std::numeric_limits<CommunityId>::max();

/// Signed weight change on one undirected edge; alpha > 0 inserts, alpha < 0 deletes.
struct EdgeDelta {
  VertexId u = 0;
  VertexId v = 0;
  Weight alpha = 0.0;

  friend bool operator==(const EdgeDelta&, const EdgeDelta&) = default;
};

/// Deltas are applied in order, never reordered.
using DeltaBatch = std::vector<EdgeDelta>;

struct WeightedEdge {
  VertexId u = 0;
  VertexId v = 0;
  Weight weight = 0.0;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

/// Weighted undirected graph with self-loops and dense vertex ids.
///
/// A self-loop of stored weight c adds 2c to the degree of its vertex and c to
/// the total weight m, so that m == sum of degrees / 2 and modularity is the same
/// whether it is evaluated on a graph or on its aggregate.
class Graph {
 public:
  struct Neighbor {
    VertexId id;
    Weight weight;
  };

  Graph() = default;
  explicit Graph(std::size_t num_vertices);

  std::size_t num_vertices() const { return adjacency_.size(); }
  /// Number of stored undirected edges, self-loops included.
  std::size_t num_edges() const { return num_edges_; }
  Weight total_weight() const { return total_weight_; }

  bool has_vertex(VertexId v) const { return v < adjacency_.size(); }
  VertexId add_vertex();
  /// Grows the vertex set so that v is valid; new vertices are isolated.
  void ensure_vertex(VertexId v);

  Weight degree(VertexId v) const;
  Weight self_loop(VertexId v) const;
  Weight weight(VertexId u, VertexId v) const;
  /// Non-loop neighbours of v, in storage order.
  std::span<const Neighbor> neighbors(VertexId v) const;

  /// Adds alpha to the weight of (u, v), creating unseen endpoints first.
  /// A weight that reaches zero removes the edge. Throws DeletionExceedsWeight
  /// if the weight would become negative; the graph is unchanged in that case.
  void update_edge(VertexId u, VertexId v, Weight alpha);

  /// Applies every delta in order. Validates the whole batch first, so a
  /// failing batch leaves the graph untouched.
  void apply(std::span<const EdgeDelta> batch);

  /// Throws DeletionExceedsWeight if applying the batch in order would drive
  /// any edge weight negative.
  void validate(std::span<const EdgeDelta> batch) const;

  /// All edges with u <= v, sorted by (u, v). Self-loops carry their stored weight.
  std::vector<WeightedEdge> edges() const;

  /// Absolute tolerance under which a weight is treated as zero.
  static Weight zero_tolerance(Weight scale);

 private:
  std::size_t find(VertexId u, VertexId v) const;
  void check_vertex(VertexId v) const;

  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<Weight> self_loops_;
  std::vector<Weight> degrees_;
  Weight total_weight_ = 0.0;
  std::size_t num_edges_ = 0;
};

/// Returns g with the batch applied (the G ⊕ ΔG operator).
Graph apply_delta(Graph g, std::span<const EdgeDelta> batch);

/// Weight between v and the vertices of `set` (duplicates ignored). v's own
/// self-loop counts twice when v is in the set.
Weight weight_to_set(const Graph& g, VertexId v, std::span<const VertexId> set);

/// Builds a graph from an edge list, accumulating duplicate edges.
Graph graph_from_edges(std::size_t num_vertices, std::span<const WeightedEdge> edges);

}  // namespace dynleiden
