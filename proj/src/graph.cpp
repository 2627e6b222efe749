#include "dynleiden/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "dynleiden/errors.hpp"

namespace dynleiden {

Graph::Graph(std::size_t num_vertices)
    : adjacency_(num_vertices), self_loops_(num_vertices, 0.0), degrees_(num_vertices, 0.0) {}

VertexId Graph::add_vertex() {
  adjacency_.emplace_back();
  self_loops_.push_back(0.0);
  degrees_.push_back(0.0);
  return static_cast<VertexId>(adjacency_.size() - 1);
}

void Graph::ensure_vertex(VertexId v) {
  if (v == kNoVertex) throw UnknownVertex(v);
  if (v >= adjacency_.size()) {
    adjacency_.resize(v + std::size_t{1});
    self_loops_.resize(v + std::size_t{1}, 0.0);
    degrees_.resize(v + std::size_t{1}, 0.0);
  }
}

void Graph::check_vertex(VertexId v) const {
  if (v >= adjacency_.size()) throw UnknownVertex(v);
}

Weight Graph::degree(VertexId v) const {
  check_vertex(v);
  return degrees_[v];
}

Weight Graph::self_loop(VertexId v) const {
  check_vertex(v);
  return self_loops_[v];
}

std::size_t Graph::find(VertexId u, VertexId v) const {
  const auto& list = adjacency_[u];
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (list[i].id == v) return i;
  }
  return list.size();
}

Weight Graph::weight(VertexId u, VertexId v) const {
  check_vertex(u);
  check_vertex(v);
  if (u == v) return self_loops_[u];
  // Scan the shorter list.
  if (adjacency_[u].size() > adjacency_[v].size()) std::swap(u, v);
  const std::size_t i = find(u, v);
  return i == adjacency_[u].size() ? 0.0 : adjacency_[u][i].weight;
}

std::span<const Graph::Neighbor> Graph::neighbors(VertexId v) const {
  check_vertex(v);
  return adjacency_[v];
}

Weight Graph::zero_tolerance(Weight scale) { return 1e-9 * std::max(1.0, std::abs(scale)); }

void Graph::update_edge(VertexId u, VertexId v, Weight alpha) {
  ensure_vertex(std::max(u, v));
  if (alpha == 0.0) return;
  if (u == v) {
    const Weight current = self_loops_[u];
    const Weight updated = current + alpha;
    const Weight tol = zero_tolerance(current);
    if (updated < -tol) throw DeletionExceedsWeight(u, v);
    const Weight next = updated <= tol ? 0.0 : updated;
    if (current == 0.0 && next > 0.0) ++num_edges_;
    if (current > 0.0 && next == 0.0) --num_edges_;
    self_loops_[u] = next;
    degrees_[u] += 2.0 * (next - current);
    total_weight_ += next - current;
    return;
  }
  const std::size_t iu = find(u, v);
  const bool present = iu != adjacency_[u].size();
  const Weight current = present ? adjacency_[u][iu].weight : 0.0;
  const Weight updated = current + alpha;
  const Weight tol = zero_tolerance(current);
  if (updated < -tol) throw DeletionExceedsWeight(u, v);
  if (updated <= tol) {
    if (!present) return;
    const std::size_t iv = find(v, u);
    adjacency_[u][iu] = adjacency_[u].back();
    adjacency_[u].pop_back();
    adjacency_[v][iv] = adjacency_[v].back();
    adjacency_[v].pop_back();
    degrees_[u] -= current;
    degrees_[v] -= current;
    total_weight_ -= current;
    --num_edges_;
    return;
  }
  if (present) {
    adjacency_[u][iu].weight = updated;
    adjacency_[v][find(v, u)].weight = updated;
  } else {
    adjacency_[u].push_back({v, updated});
    adjacency_[v].push_back({u, updated});
    ++num_edges_;
  }
  degrees_[u] += alpha;
  degrees_[v] += alpha;
  total_weight_ += alpha;
}

void Graph::validate(std::span<const EdgeDelta> batch) const {
  // Net change per edge seen so far in this batch.
  std::map<std::pair<VertexId, VertexId>, Weight> pending;
  for (const auto& d : batch) {
    if (d.u == kNoVertex || d.v == kNoVertex) throw UnknownVertex(kNoVertex);
    if (d.alpha >= 0.0) {
      if (d.alpha > 0.0) pending[std::minmax(d.u, d.v)] += d.alpha;
      continue;
    }
    const auto key = std::minmax(d.u, d.v);
    Weight current = 0.0;
    if (has_vertex(d.u) && has_vertex(d.v)) current = weight(d.u, d.v);
    auto& net = pending[key];
    const Weight before = current + net;
    if (before + d.alpha < -zero_tolerance(before)) throw DeletionExceedsWeight(d.u, d.v);
    net += d.alpha;
    if (current + net <= zero_tolerance(before)) net = -current;
  }
}

void Graph::apply(std::span<const EdgeDelta> batch) {
  validate(batch);
  for (const auto& d : batch) update_edge(d.u, d.v, d.alpha);
}

std::vector<WeightedEdge> Graph::edges() const {
  std::vector<WeightedEdge> out;
  out.reserve(num_edges_);
  for (VertexId u = 0; u < adjacency_.size(); ++u) {
    if (self_loops_[u] > 0.0) out.push_back({u, u, self_loops_[u]});
    for (const auto& n : adjacency_[u]) {
      if (u < n.id) out.push_back({u, n.id, n.weight});
    }
  }
  std::sort(out.begin(), out.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  return out;
}

Graph apply_delta(Graph g, std::span<const EdgeDelta> batch) {
  g.apply(batch);
  return g;
}

Weight weight_to_set(const Graph& g, VertexId v, std::span<const VertexId> set) {
  if (!g.has_vertex(v)) throw UnknownVertex(v);
  std::vector<VertexId> sorted(set.begin(), set.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const auto contains = [&](VertexId x) {
    return std::binary_search(sorted.begin(), sorted.end(), x);
  };
  Weight total = contains(v) ? 2.0 * g.self_loop(v) : 0.0;
  for (const auto& n : g.neighbors(v)) {
    if (contains(n.id)) total += n.weight;
  }
  return total;
}

Graph graph_from_edges(std::size_t num_vertices, std::span<const WeightedEdge> edges) {
  Graph g(num_vertices);
  for (const auto& e : edges) g.update_edge(e.u, e.v, e.weight);
  return g;
}

}  // namespace dynleiden
