#include "dynleiden/cc_index.hpp"

#include <algorithm>
#include <map>

#include "dynleiden/errors.hpp"

namespace dynleiden {

void CCIndex::ensure_vertex(VertexId v) {
  while (label_.size() <= v) {
    label_.push_back(fresh_label(1));
  }
  graph_.ensure_vertex(v);
  if (stamp_.size() < label_.size()) stamp_.resize(label_.size(), 0);
}

CCIndex::Label CCIndex::fresh_label(std::size_t size) {
  size_.push_back(size);
  return static_cast<Label>(size_.size() - 1);
}

void CCIndex::relabel(VertexId start, Label to) {
  const Label from = label_[start];
  std::vector<VertexId> stack{start};
  label_[start] = to;
  while (!stack.empty()) {
    const VertexId x = stack.back();
    stack.pop_back();
    ++work_;
    for (const auto& n : graph_.neighbors(x)) {
      if (label_[n.id] == from) {
        label_[n.id] = to;
        stack.push_back(n.id);
      }
    }
  }
}

bool CCIndex::split_test(VertexId u, VertexId v) {
  // Each side gets its own stamp value.
  epoch_ += 2;
  const std::uint32_t mark_a = epoch_ - 1;
  const std::uint32_t mark_b = epoch_;
  std::vector<VertexId> seen_a{u};
  std::vector<VertexId> seen_b{v};
  std::size_t head_a = 0;
  std::size_t head_b = 0;
  stamp_[u] = mark_a;
  stamp_[v] = mark_b;
  const auto expand = [&](std::vector<VertexId>& seen, std::size_t& head, std::uint32_t mine,
                          std::uint32_t other) {
    const VertexId x = seen[head++];
    ++work_;
    for (const auto& n : graph_.neighbors(x)) {
      if (stamp_[n.id] == other) return true;
      if (stamp_[n.id] != mine) {
        stamp_[n.id] = mine;
        seen.push_back(n.id);
      }
    }
    return false;
  };
  while (true) {
    if (head_a == seen_a.size() || head_b == seen_b.size()) break;
    if (expand(seen_a, head_a, mark_a, mark_b)) return false;
    if (head_b == seen_b.size() || head_a == seen_a.size()) break;
    if (expand(seen_b, head_b, mark_b, mark_a)) return false;
  }
  const auto& piece = head_a == seen_a.size() ? seen_a : seen_b;
  const Label old = label_[u];
  const Label fresh = fresh_label(piece.size());
  size_[old] -= piece.size();
  for (const VertexId x : piece) label_[x] = fresh;
  return true;
}

bool CCIndex::update_edge(VertexId u, VertexId v, Weight alpha) {
  if (u == v || alpha == 0.0) return false;
  ensure_vertex(std::max(u, v));
  if (alpha > 0.0) {
    if (label_[u] != label_[v]) {
      Label big = label_[u];
      Label small = label_[v];
      VertexId start = v;
      if (size_[big] < size_[small]) {
        std::swap(big, small);
        start = u;
      }
      size_[big] += size_[small];
      size_[small] = 0;
      relabel(start, big);
    }
    graph_.update_edge(u, v, alpha);
    return false;
  }
  const Weight current = graph_.weight(u, v);
  if (current <= 0.0) throw EdgeNotInIndex(u, v);
  graph_.update_edge(u, v, std::max(alpha, -current));
  if (graph_.weight(u, v) > 0.0) return false;
  return split_test(u, v);
}

std::vector<VertexId> CCIndex::isolate(VertexId v) {
  std::vector<VertexId> split;
  if (v >= num_vertices()) return split;
  const auto nbrs = graph_.neighbors(v);
  const std::vector<Graph::Neighbor> copy(nbrs.begin(), nbrs.end());
  for (const auto& n : copy) {
    if (update_edge(v, n.id, -n.weight)) {
      split.push_back(v);
      split.push_back(n.id);
    }
  }
  return split;
}

std::vector<VertexId> CCIndex::component(VertexId v) const {
  epoch_ += 2;
  std::vector<VertexId> out{v};
  stamp_[v] = epoch_;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const auto& n : graph_.neighbors(out[i])) {
      if (stamp_[n.id] != epoch_) {
        stamp_[n.id] = epoch_;
        out.push_back(n.id);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

CCIndex build_cc_index(const Graph& g, std::span<const VertexId> s) {
  CCIndex idx;
  const std::size_t n = g.num_vertices();
  if (n > 0) idx.ensure_vertex(static_cast<VertexId>(n - 1));
  std::vector<WeightedEdge> edges;
  for (VertexId u = 0; u < n; ++u) {
    for (const auto& nb : g.neighbors(u)) {
      if (u < nb.id && s[u] == s[nb.id]) edges.push_back({u, nb.id, nb.weight});
    }
  }
  idx.graph_ = graph_from_edges(n, edges);
  // Components from scratch: one label per BFS tree.
  idx.size_.clear();
  std::vector<char> done(n, 0);
  for (VertexId r = 0; r < n; ++r) {
    if (done[r]) continue;
    const CCIndex::Label l = idx.fresh_label(0);
    std::vector<VertexId> stack{r};
    done[r] = 1;
    while (!stack.empty()) {
      const VertexId x = stack.back();
      stack.pop_back();
      idx.label_[x] = l;
      ++idx.size_[l];
      for (const auto& nb : idx.graph_.neighbors(x)) {
        if (!done[nb.id]) {
          done[nb.id] = 1;
          stack.push_back(nb.id);
        }
      }
    }
  }
  return idx;
}

std::vector<SplitComponent> extract_split_components(const CCIndex& index,
                                                     std::span<const VertexId> s,
                                                     std::span<const VertexId> k,
                                                     bool keeper_vertices) {
  // sub-community -> label -> smallest K vertex seen with that label
  std::map<VertexId, std::map<CCIndex::Label, VertexId>> pieces;
  for (const VertexId v : k) {
    if (v >= s.size() || v >= index.num_vertices() || s[v] == kNoVertex) continue;
    auto [it, inserted] = pieces[s[v]].try_emplace(index.label(v), v);
    if (!inserted) it->second = std::min(it->second, v);
  }
  std::vector<SplitComponent> out;
  for (const auto& [sub, labels] : pieces) {
    if (labels.size() < 2) continue;
    std::size_t largest = 0;
    std::size_t tied = 0;
    for (const auto& [l, _] : labels) {
      const std::size_t size = index.component_size(l);
      if (size > largest) {
        largest = size;
        tied = 0;
      }
      tied += size == largest;
    }
    std::vector<SplitComponent> comps;
    for (const auto& [l, rep] : labels) {
      const bool big = index.component_size(l) == largest;
      // A unique largest component is the keeper without looking inside it.
      if (big && tied == 1 && !keeper_vertices) {
        comps.push_back({sub, {}, true});
        continue;
      }
      comps.push_back({sub, index.component(rep), big && tied == 1});
    }
    if (tied > 1) {
      SplitComponent* keeper = nullptr;
      for (auto& c : comps) {
        if (c.vertices.size() == largest && (!keeper || c.vertices.front() < keeper->vertices.front())) {
          keeper = &c;
        }
      }
      keeper->keeps_original_id = true;
      if (!keeper_vertices) keeper->vertices.clear();
    }
    std::sort(comps.begin(), comps.end(), [](const SplitComponent& a, const SplitComponent& b) {
      if (a.keeps_original_id != b.keeps_original_id) return a.keeps_original_id;
      return a.vertices < b.vertices;
    });
    for (auto& c : comps) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace dynleiden
