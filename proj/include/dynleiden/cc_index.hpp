#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dynleiden/graph.hpp"

namespace dynleiden {

/// Connected components of G_Ψ, the subgraph of intra-sub-community edges.
/// Every vertex carries a component label; deletions that disconnect a
/// component are detected by a bidirectional BFS that stops as soon as either
/// side runs out, so the cost is bounded by the smaller piece.
class CCIndex {
 public:
  using Label = std::uint32_t;

  CCIndex() = default;

  std::size_t num_vertices() const { return graph_.num_vertices(); }
  /// Grows the index so v exists; new vertices are isolated components.
  void ensure_vertex(VertexId v);

  Label label(VertexId v) const { return label_[v]; }
  std::size_t component_size(Label l) const { return size_[l]; }
  bool connected(VertexId u, VertexId v) const { return label_[u] == label_[v]; }

  const Graph& graph() const { return graph_; }
  std::span<const Graph::Neighbor> neighbors(VertexId v) const { return graph_.neighbors(v); }
  Weight weight(VertexId u, VertexId v) const { return graph_.weight(u, v); }

  /// Adds alpha to edge (u, v) of G_Ψ. The caller guarantees s(u) == s(v).
  /// Insertions join components and return false. A deletion returns true iff
  /// it removes the edge and u, v are no longer connected; the side found
  /// first to be exhausted gets a fresh label. Throws EdgeNotInIndex when
  /// deleting an absent edge. Self-loops are ignored.
  bool update_edge(VertexId u, VertexId v, Weight alpha);

  /// Deletes every G_Ψ edge of v; returns the endpoints of deletions that split.
  std::vector<VertexId> isolate(VertexId v);

  /// Vertices of v's component, ascending.
  std::vector<VertexId> component(VertexId v) const;

  /// Total BFS vertex visits since construction (instrumentation).
  std::uint64_t work() const { return work_; }

  friend CCIndex build_cc_index(const Graph& g, std::span<const VertexId> s);

 private:
  Label fresh_label(std::size_t size);
  void relabel(VertexId start, Label to);
  bool split_test(VertexId u, VertexId v);

  Graph graph_;
  std::vector<Label> label_;
  std::vector<std::size_t> size_;
  // Scratch for the searches: visit stamps per side.
  mutable std::vector<std::uint32_t> stamp_;
  mutable std::uint32_t epoch_ = 0;
  std::uint64_t work_ = 0;
};

/// Labels each sub-community's connected pieces by BFS over edges whose
/// endpoints share s.
CCIndex build_cc_index(const Graph& g, std::span<const VertexId> s);

struct SplitComponent {
  VertexId sub;                   // sub-community the component belongs to
  std::vector<VertexId> vertices; // ascending; empty for a keeper unless requested
  bool keeps_original_id;
};

/// For each sub-community containing a vertex of k, lists its current
/// components. The largest keeps the sub-community id; ties go to the one with
/// the smallest vertex id. Sub-communities that are still one piece produce
/// nothing. Output is grouped by ascending sub-community, keeper first, the
/// rest by smallest vertex id. k must hold every endpoint of a splitting
/// deletion since the last extraction, so that each piece contains one.
std::vector<SplitComponent> extract_split_components(const CCIndex& index,
                                                     std::span<const VertexId> s,
                                                     std::span<const VertexId> k,
                                                     bool keeper_vertices = true);

}  // namespace dynleiden
