#include "dynleiden/leiden.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "dynleiden/errors.hpp"
#include "dynleiden/partition.hpp"
#include "movement.hpp"

namespace dynleiden {

std::vector<VertexId> move_phase(LevelState& level, double gamma, CommunityId& next_community) {
  const Graph& g = level.graph;
  detail::DegreeTable degrees;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    degrees.add(level.f[v], g.degree(v));
    next_community = std::max(next_community, level.f[v] + 1);
  }
  detail::WorkQueue queue;
  detail::Accumulator scratch;
  const std::vector<CommunityId> before = level.f;
  // A move changes d(C) for non-neighbours too, so sweep until a full pass is quiet.
  for (bool moved_any = true; moved_any;) {
    moved_any = false;
    for (VertexId v = 0; v < g.num_vertices(); ++v) queue.push(v);
    detail::run_movement(g, level.f, degrees, next_community, gamma, queue, scratch,
                         [&](VertexId, CommunityId, CommunityId) { moved_any = true; });
  }
  std::vector<VertexId> moved;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (level.f[v] != before[v]) moved.push_back(v);
  }
  return moved;
}

std::size_t refine_phase(LevelState& level, double gamma) {
  const Graph& g = level.graph;
  const std::size_t n = g.num_vertices();
  const Weight m = g.total_weight();
  const auto& f = level.f;
  detail::DegreeTable community_degree;
  for (VertexId v = 0; v < n; ++v) community_degree.add(f[v], g.degree(v));

  // Sub-communities start as singletons, named by their founding vertex.
  std::vector<VertexId> sub(n);
  std::iota(sub.begin(), sub.end(), VertexId{0});
  std::vector<Weight> sub_degree(n);
  std::vector<Weight> sub_ext(n, 0.0);  // w(S, C \ S)
  std::vector<std::uint32_t> sub_size(n, 1);
  for (VertexId v = 0; v < n; ++v) {
    sub_degree[v] = g.degree(v);
    for (const auto& nb : g.neighbors(v)) {
      if (f[nb.id] == f[v]) sub_ext[v] += nb.weight;
    }
  }

  if (m > 0.0) {
    std::vector<VertexId> order(n);
    std::iota(order.begin(), order.end(), VertexId{0});
    detail::sort_by_degree(g, order);
    detail::Accumulator to_sub;
    for (const VertexId v : order) {
      if (sub_size[sub[v]] != 1) continue;
      const Weight d_c = community_degree[f[v]];
      to_sub.clear();
      for (const auto& nb : g.neighbors(v)) {
        if (f[nb.id] == f[v]) to_sub.add(sub[nb.id], nb.weight);
      }
      VertexId best = kNoVertex;
      double best_gain = 0.0;
      for (const auto s : to_sub.keys()) {
        if (!detail::locally_optimized(sub_ext[s], sub_degree[s], d_c, m, gamma)) continue;
        const double gain = detail::merge_gain(to_sub[s], g.degree(v), sub_degree[s], m, gamma);
        if (best == kNoVertex || gain > best_gain || (gain == best_gain && s > best)) {
          best = s;
          best_gain = gain;
        }
      }
      if (best == kNoVertex || best_gain <= kGainTolerance) continue;
      const VertexId own = sub[v];
      sub[v] = best;
      sub_size[own] = 0;
      ++sub_size[best];
      sub_degree[best] += sub_degree[own];
      sub_ext[best] += sub_ext[own] - 2.0 * to_sub[best];
    }
  }

  std::vector<VertexId> dense(n, kNoVertex);
  VertexId next = 0;
  level.s.assign(n, kNoVertex);
  for (VertexId v = 0; v < n; ++v) {
    if (dense[sub[v]] == kNoVertex) dense[sub[v]] = next++;
    level.s[v] = dense[sub[v]];
  }
  return next;
}

Graph aggregate_graph(const Graph& g, const std::vector<VertexId>& s, std::size_t k) {
  std::vector<std::vector<VertexId>> members(k);
  for (VertexId v = 0; v < g.num_vertices(); ++v) members[s[v]].push_back(v);
  std::vector<WeightedEdge> edges;
  detail::Accumulator acc;
  for (VertexId a = 0; a < k; ++a) {
    acc.clear();
    Weight loop = 0.0;
    for (const VertexId v : members[a]) {
      loop += g.self_loop(v);
      for (const auto& nb : g.neighbors(v)) {
        const VertexId b = s[nb.id];
        if (b == a) {
          if (v < nb.id) loop += nb.weight;
        } else if (a < b) {
          acc.add(b, nb.weight);
        }
      }
    }
    if (loop > 0.0) edges.push_back({a, a, loop});
    std::vector<VertexId> keys(acc.keys().begin(), acc.keys().end());
    std::sort(keys.begin(), keys.end());
    for (const VertexId b : keys) edges.push_back({a, b, acc[b]});
  }
  return graph_from_edges(k, edges);
}

LevelState aggregate_phase(const LevelState& level) {
  std::size_t k = 0;
  for (const VertexId x : level.s) k = std::max<std::size_t>(k, x + std::size_t{1});
  LevelState next;
  next.graph = aggregate_graph(level.graph, level.s, k);
  next.f.assign(k, kNoCommunity);
  for (VertexId v = 0; v < level.s.size(); ++v) next.f[level.s[v]] = level.f[v];
  return next;
}

void compose_roots(Hierarchy& h) {
  if (h.levels.empty()) return;
  h.levels.back().g = h.levels.back().s;
  for (std::size_t p = h.levels.size() - 1; p-- > 0;) {
    auto& level = h.levels[p];
    const auto& above = h.levels[p + 1].g;
    level.g.resize(level.s.size());
    for (VertexId v = 0; v < level.s.size(); ++v) level.g[v] = above[level.s[v]];
  }
}

void sync_communities(Hierarchy& h) {
  for (std::size_t p = h.levels.size() - 1; p-- > 0;) {
    auto& level = h.levels[p];
    const auto& above = h.levels[p + 1].f;
    for (VertexId v = 0; v < level.s.size(); ++v) level.f[v] = above[level.s[v]];
  }
}

Hierarchy run_leiden(const Graph& g, const std::vector<CommunityId>& initial,
                     const LeidenOptions& options, PhaseTimes* times) {
  if (options.levels == 0) throw std::invalid_argument("at least one level is required");
  if (!initial.empty() && initial.size() != g.num_vertices()) {
    throw Error("initial membership size does not match the vertex count");
  }
  Hierarchy h;
  h.gamma = options.gamma;
  LevelState base;
  base.graph = g;
  if (initial.empty()) {
    base.f.resize(g.num_vertices());
    std::iota(base.f.begin(), base.f.end(), CommunityId{0});
  } else {
    base.f = normalize_membership(initial);
  }
  for (const CommunityId c : base.f) h.next_community = std::max(h.next_community, c + 1);
  h.levels.push_back(std::move(base));
  PhaseTimes local;
  detail::Stopwatch clock;
  for (std::size_t p = 0; p < options.levels; ++p) {
    auto& level = h.levels.back();
    move_phase(level, options.gamma, h.next_community);
    local.movement_ms += clock.lap();
    refine_phase(level, options.gamma);
    local.refinement_ms += clock.lap();
    if (p + 1 < options.levels) h.levels.push_back(aggregate_phase(h.levels.back()));
    local.aggregation_ms += clock.lap();
  }
  compose_roots(h);
  if (times) {
    times->movement_ms += local.movement_ms;
    times->refinement_ms += local.refinement_ms;
    times->aggregation_ms += local.aggregation_ms;
  }
  return h;
}

std::string hierarchy_to_json(const Hierarchy& h) {
  nlohmann::json out;
  out["gamma"] = h.gamma;
  out["next_community"] = h.next_community;
  out["levels"] = nlohmann::json::array();
  for (const auto& level : h.levels) {
    nlohmann::json l;
    l["num_vertices"] = level.graph.num_vertices();
    l["f"] = level.f;
    l["s"] = level.s;
    l["g"] = level.g;
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : level.graph.edges()) edges.push_back({e.u, e.v, e.weight});
    l["edges"] = std::move(edges);
    out["levels"].push_back(std::move(l));
  }
  return out.dump();
}

Hierarchy hierarchy_from_json(const std::string& text) {
  Hierarchy h;
  try {
    const auto in = nlohmann::json::parse(text);
    h.gamma = in.value("gamma", 1.0);
    bool has_roots = true;
    for (const auto& l : in.at("levels")) {
      LevelState level;
      std::vector<WeightedEdge> edges;
      for (const auto& e : l.at("edges")) {
        edges.push_back({e.at(0).get<VertexId>(), e.at(1).get<VertexId>(), e.at(2).get<Weight>()});
      }
      level.graph = graph_from_edges(l.at("num_vertices").get<std::size_t>(), edges);
      level.f = l.at("f").get<std::vector<CommunityId>>();
      level.s = l.at("s").get<std::vector<VertexId>>();
      if (l.contains("g")) {
        level.g = l.at("g").get<std::vector<VertexId>>();
      } else {
        has_roots = false;
      }
      if (level.f.size() != level.graph.num_vertices() ||
          level.s.size() != level.graph.num_vertices()) {
        throw Error("snapshot level has mismatched array sizes");
      }
      for (const CommunityId c : level.f) h.next_community = std::max(h.next_community, c + 1);
      h.levels.push_back(std::move(level));
    }
    if (in.contains("next_community")) {
      h.next_community = std::max(h.next_community, in.at("next_community").get<CommunityId>());
    }
    if (!has_roots) compose_roots(h);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad hierarchy snapshot: ") + e.what());
  }
  return h;
}

}  // namespace dynleiden
