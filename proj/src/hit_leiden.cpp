#include "dynleiden/hit_leiden.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "dynleiden/errors.hpp"
#include "movement.hpp"

namespace dynleiden {

namespace {

void sort_unique(std::vector<VertexId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void ensure_sub_slot(HitLevel& level, VertexId sub) {
  if (sub >= level.members.size()) {
    level.members.resize(sub + std::size_t{1});
    level.sub_degree.resize(sub + std::size_t{1}, 0.0);
  }
  level.next_sub = std::max(level.next_sub, sub + 1);
}

/// Appends vertex v (== num_vertices()) in community c with a fresh singleton
/// sub-community; c == kNoCommunity appends a retired vertex.
void grow_vertex(HitLevel& level, VertexId v, CommunityId c) {
  level.graph.ensure_vertex(v);
  level.psi.ensure_vertex(v);
  level.f.push_back(c);
  level.s_pre.push_back(kNoVertex);
  level.s_cur.push_back(kNoVertex);
  level.g.push_back(kNoVertex);
  level.slot.push_back(0);
  if (c == kNoCommunity) return;
  const VertexId sub = fresh_sub(level);
  assign_sub(level, v, sub);
  level.s_pre[v] = sub;
}

}  // namespace

void assign_sub(HitLevel& level, VertexId v, VertexId sub) {
  const VertexId old = level.s_cur[v];
  if (old == sub) return;
  const Weight d = level.graph.degree(v);
  if (old != kNoVertex) {
    auto& list = level.members[old];
    const std::uint32_t at = level.slot[v];
    list[at] = list.back();
    level.slot[list[at]] = at;
    list.pop_back();
    level.sub_degree[old] -= d;
    if (list.empty()) {
      level.sub_degree[old] = 0.0;
      level.emptied.push_back(old);
    }
  }
  if (sub != kNoVertex) {
    ensure_sub_slot(level, sub);
    level.slot[v] = static_cast<std::uint32_t>(level.members[sub].size());
    level.members[sub].push_back(v);
    level.sub_degree[sub] += d;
  }
  level.s_cur[v] = sub;
}

VertexId fresh_sub(HitLevel& level) {
  const VertexId sub = level.next_sub;
  ensure_sub_slot(level, sub);
  return sub;
}

HitState hit_state_from_hierarchy(const Hierarchy& source) {
  Hierarchy h = source;
  if (h.levels.empty()) throw std::invalid_argument("hierarchy has no levels");
  bool roots = true;
  for (const auto& level : h.levels) roots = roots && level.g.size() == level.s.size();
  if (!roots) compose_roots(h);
  HitState state;
  state.gamma = h.gamma;
  state.next_community = h.next_community;
  for (std::size_t p = 0; p < h.levels.size(); ++p) {
    auto& in = h.levels[p];
    HitLevel level;
    level.graph = std::move(in.graph);
    level.f = std::move(in.f);
    level.s_cur = in.s;
    level.s_pre = in.s;
    level.g = std::move(in.g);
    level.psi = build_cc_index(level.graph, level.s_cur);
    const std::size_t n = level.f.size();
    std::size_t subs = p + 1 < h.levels.size() ? h.levels[p + 1].f.size() : 0;
    for (const VertexId x : level.s_cur) subs = std::max<std::size_t>(subs, x + std::size_t{1});
    level.members.resize(subs);
    level.sub_degree.assign(subs, 0.0);
    level.next_sub = static_cast<VertexId>(subs);
    level.slot.assign(n, 0);
    for (VertexId v = 0; v < n; ++v) {
      const Weight d = level.graph.degree(v);
      level.community_degree.add(level.f[v], d);
      state.next_community = std::max(state.next_community, level.f[v] + 1);
      level.slot[v] = static_cast<std::uint32_t>(level.members[level.s_cur[v]].size());
      level.members[level.s_cur[v]].push_back(v);
      level.sub_degree[level.s_cur[v]] += d;
    }
    state.levels.push_back(std::move(level));
  }
  return state;
}

HitState build_hit_state(const Graph& g, std::size_t levels, double gamma) {
  LeidenOptions options;
  options.levels = levels;
  options.gamma = gamma;
  Hierarchy h = run_leiden(g, {}, options);
  sync_communities(h);
  return hit_state_from_hierarchy(h);
}

Hierarchy hierarchy_view(const HitState& state) {
  Hierarchy h;
  h.gamma = state.gamma;
  h.next_community = state.next_community;
  for (const auto& level : state.levels) {
    LevelState out;
    out.graph = level.graph;
    out.f = level.f;
    out.s = level.s_cur;
    out.g = level.g;
    h.levels.push_back(std::move(out));
  }
  return h;
}

void apply_level_delta(HitLevel& level, const DeltaBatch& delta) {
  for (const auto& d : delta) {
    level.graph.update_edge(d.u, d.v, d.alpha);
    level.community_degree.add(level.f[d.u], d.alpha);
    level.community_degree.add(level.f[d.v], d.alpha);
    if (level.s_cur[d.u] != kNoVertex) level.sub_degree[level.s_cur[d.u]] += d.alpha;
    if (level.s_cur[d.v] != kNoVertex) level.sub_degree[level.s_cur[d.v]] += d.alpha;
  }
}

MovementResult inc_movement(HitLevel& level, const DeltaBatch& delta, double gamma,
                            CommunityId& next_community, std::span<const VertexId> retire) {
  MovementResult out;
  auto& f = level.f;
  const auto split = [&](VertexId u, VertexId v) {
    out.split_endpoints.push_back(u);
    out.split_endpoints.push_back(v);
    ++out.splits;
  };
  std::vector<VertexId> seeds;
  for (const auto& d : delta) {
    if ((d.alpha > 0.0 && f[d.u] != f[d.v]) || (d.alpha < 0.0 && f[d.u] == f[d.v])) {
      seeds.push_back(d.u);
      seeds.push_back(d.v);
    }
    const VertexId su = level.s_cur[d.u];
    if (d.u != d.v && su != kNoVertex && su == level.s_cur[d.v] &&
        level.psi.update_edge(d.u, d.v, d.alpha)) {
      split(d.u, d.v);
    }
  }
  for (const VertexId v : retire) {
    const auto pairs = level.psi.isolate(v);
    for (std::size_t i = 0; i < pairs.size(); i += 2) split(pairs[i], pairs[i + 1]);
    assign_sub(level, v, kNoVertex);
  }

  detail::WorkQueue queue;
  detail::Accumulator scratch;
  for (const VertexId v : seeds) {
    if (!level.retired(v)) queue.push(v);
  }
  std::unordered_set<VertexId> seen;
  detail::run_movement(level.graph, f, level.community_degree, next_community, gamma, queue, scratch,
                       [&](VertexId v, CommunityId from, CommunityId) {
                         if (seen.insert(v).second) out.moved.emplace_back(v, from);
                         const auto pairs = level.psi.isolate(v);
                         for (std::size_t i = 0; i < pairs.size(); i += 2) split(pairs[i], pairs[i + 1]);
                       });
  out.pushes = queue.pushes();
  return out;
}

std::vector<VertexId> inc_refinement(HitLevel& level, std::span<const VertexId> movers,
                                     std::span<const VertexId> split_endpoints,
                                     std::span<const VertexId> arrivals, double gamma) {
  const Graph& g = level.graph;
  const auto& f = level.f;
  auto& s = level.s_cur;
  std::vector<VertexId> touched;
  std::vector<VertexId> candidates;
  for (const VertexId v : movers) {
    assign_sub(level, v, fresh_sub(level));
    touched.push_back(v);
    candidates.push_back(v);
  }
  for (const auto& piece : extract_split_components(level.psi, s, split_endpoints, false)) {
    if (piece.keeps_original_id) continue;
    const VertexId sub = fresh_sub(level);
    for (const VertexId x : piece.vertices) {
      assign_sub(level, x, sub);
      touched.push_back(x);
    }
    if (piece.vertices.size() == 1) candidates.push_back(piece.vertices.front());
  }
  candidates.insert(candidates.end(), arrivals.begin(), arrivals.end());
  sort_unique(candidates);
  detail::sort_by_degree(g, candidates);

  const Weight m = g.total_weight();
  std::unordered_map<VertexId, Weight> ext_cache;  // w(S, C \ S)
  const auto ext_of = [&](VertexId sub, CommunityId c) {
    const auto it = ext_cache.find(sub);
    if (it != ext_cache.end()) return it->second;
    Weight ext = 0.0;
    for (const VertexId x : level.members[sub]) {
      for (const auto& nb : g.neighbors(x)) {
        if (f[nb.id] == c && s[nb.id] != sub) ext += nb.weight;
      }
    }
    ext_cache.emplace(sub, ext);
    return ext;
  };
  detail::Accumulator to_sub;
  if (m <= 0.0) candidates.clear();
  for (const VertexId v : candidates) {
    const VertexId own = s[v];
    if (own == kNoVertex || level.members[own].size() != 1) continue;
    const CommunityId c = f[v];
    const Weight d_c = level.community_degree[c];
    to_sub.clear();
    Weight ext_v = 0.0;
    for (const auto& nb : g.neighbors(v)) {
      if (f[nb.id] == c && s[nb.id] != kNoVertex) {
        to_sub.add(s[nb.id], nb.weight);
        ext_v += nb.weight;
      }
    }
    VertexId best = kNoVertex;
    double best_gain = 0.0;
    for (const auto t : to_sub.keys()) {
      if (!detail::locally_optimized(ext_of(t, c), level.sub_degree[t], d_c, m, gamma)) continue;
      const double gain = detail::merge_gain(to_sub[t], g.degree(v), level.sub_degree[t], m, gamma);
      if (best == kNoVertex || gain > best_gain || (gain == best_gain && t > best)) {
        best = t;
        best_gain = gain;
      }
    }
    if (best == kNoVertex || best_gain <= kGainTolerance) continue;
    ext_cache[best] = ext_of(best, c) + ext_v - 2.0 * to_sub[best];
    ext_cache.erase(own);
    assign_sub(level, v, best);
    touched.push_back(v);
    for (const auto& nb : g.neighbors(v)) {
      if (s[nb.id] == best) level.psi.update_edge(v, nb.id, nb.weight);
    }
  }

  std::vector<VertexId> r;
  for (const VertexId v : touched) {
    if (s[v] != level.s_pre[v]) r.push_back(v);
  }
  sort_unique(r);
  return r;
}

DeltaBatch compress_deltas(const DeltaBatch& delta) {
  std::map<std::pair<VertexId, VertexId>, std::pair<Weight, Weight>> sums;  // net, magnitude
  for (const auto& d : delta) {
    auto& entry = sums[std::minmax(d.u, d.v)];
    entry.first += d.alpha;
    entry.second += std::abs(d.alpha);
  }
  DeltaBatch out;
  for (const auto& [uv, entry] : sums) {
    if (std::abs(entry.first) > Graph::zero_tolerance(entry.second)) {
      out.push_back({uv.first, uv.second, entry.first});
    }
  }
  return out;
}

DeltaBatch inc_aggregation(HitLevel& level, const DeltaBatch& delta, std::span<const VertexId> r) {
  const auto& pre = level.s_pre;
  const auto& cur = level.s_cur;
  DeltaBatch out;
  out.reserve(delta.size());
  for (const auto& d : delta) out.push_back({pre[d.u], pre[d.v], d.alpha});
  for (const VertexId v : r) {
    if (cur[v] == kNoVertex) continue;
    for (const auto& nb : level.graph.neighbors(v)) {
      const VertexId u = nb.id;
      // A pair of movers is transferred once, from the smaller id.
      if (cur[u] == pre[u] || v < u) {
        out.push_back({pre[v], pre[u], -nb.weight});
        out.push_back({cur[v], cur[u], nb.weight});
      }
    }
    const Weight loop = level.graph.self_loop(v);
    if (loop > 0.0) {
      out.push_back({pre[v], pre[v], -loop});
      out.push_back({cur[v], cur[v], loop});
    }
  }
  for (const VertexId v : r) level.s_pre[v] = level.s_cur[v];
  return compress_deltas(out);
}

std::vector<ChangeLog> def_update(HitState& state, std::vector<std::vector<VertexId>> changed,
                                  DeferredMap map) {
  const std::size_t levels = state.levels.size();
  changed.resize(levels);
  std::vector<ChangeLog> log(levels);
  for (std::size_t p = levels; p-- > 0;) {
    auto& level = state.levels[p];
    auto& set = changed[p];
    sort_unique(set);
    const bool top = p + 1 == levels;
    for (const VertexId v : set) {
      const VertexId parent = level.s_cur[v];
      if (map == DeferredMap::kCommunities) {
        if (!top && parent != kNoVertex) {
          const CommunityId c = state.levels[p + 1].f[parent];
          if (c != level.f[v]) {
            log[p].emplace_back(v, level.f[v]);
            const Weight d = level.graph.degree(v);
            level.community_degree.add(level.f[v], -d);
            level.community_degree.add(c, d);
            level.f[v] = c;
          }
        }
      } else {
        VertexId root = parent;
        if (!top && parent != kNoVertex) root = state.levels[p + 1].g[parent];
        if (root != level.g[v]) {
          log[p].emplace_back(v, level.g[v]);
          level.g[v] = root;
        }
      }
      if (p > 0 && v < state.levels[p - 1].members.size()) {
        const auto& children = state.levels[p - 1].members[v];
        changed[p - 1].insert(changed[p - 1].end(), children.begin(), children.end());
      }
    }
  }
  return log;
}

std::size_t BatchStats::changed() const {
  std::size_t total = 0;
  for (const auto& l : levels) total += l.touched;
  return total;
}

std::size_t BatchStats::affected() const {
  std::size_t total = 0;
  for (const auto& l : levels) total += l.affected;
  return total;
}

StepResult hit_leiden_step(HitState& state, const DeltaBatch& batch) {
  StepResult result;
  const std::size_t levels = state.levels.size();
  if (levels == 0) throw Error("HIT state has no levels");
  state.levels.front().graph.validate(batch);

  detail::Stopwatch total;
  detail::Stopwatch lap;
  result.stats.levels.resize(levels);
  std::vector<std::vector<VertexId>> movers(levels);
  std::vector<std::vector<std::pair<VertexId, CommunityId>>> moved(levels);
  std::vector<std::vector<VertexId>> r_sets(levels);
  std::vector<std::vector<std::pair<VertexId, VertexId>>> r_old(levels);
  std::vector<std::vector<VertexId>> arrivals(levels);
  std::vector<std::size_t> stillborn(levels, 0);
  std::vector<VertexId> retire;
  DeltaBatch delta = batch;

  for (std::size_t p = 0; p < levels; ++p) {
    HitLevel& level = state.levels[p];
    level.emptied.clear();
    if (p == 0) {
      VertexId top = 0;
      bool any = false;
      for (const auto& d : delta) {
        top = std::max({top, d.u, d.v});
        any = true;
      }
      while (any && level.num_vertices() <= top) {
        const auto v = static_cast<VertexId>(level.num_vertices());
        grow_vertex(level, v, state.next_community++);
        arrivals[p].push_back(v);
      }
    } else {
      const HitLevel& below = state.levels[p - 1];
      while (level.num_vertices() < below.next_sub) {
        const auto v = static_cast<VertexId>(level.num_vertices());
        const auto& kids = below.members[v];
        grow_vertex(level, v, kids.empty() ? kNoCommunity : below.f[kids.front()]);
        if (kids.empty()) {
          ++stillborn[p];
        } else {
          arrivals[p].push_back(v);
        }
      }
    }
    apply_level_delta(level, delta);
    {
      std::vector<VertexId> ends;
      for (const auto& d : delta) {
        ends.push_back(d.u);
        ends.push_back(d.v);
      }
      sort_unique(ends);
      result.stats.levels[p].touched = ends.size();
    }
    result.level_deltas.push_back(delta);
    lap.lap();

    auto mv = inc_movement(level, delta, state.gamma, state.next_community, retire);
    result.stats.levels[p].pushes = mv.pushes;
    result.stats.levels[p].splits = mv.splits;
    for (const auto& [v, _] : mv.moved) movers[p].push_back(v);
    moved[p] = std::move(mv.moved);
    result.stats.ms_movement += lap.lap();

    auto r = inc_refinement(level, movers[p], mv.split_endpoints, arrivals[p], state.gamma);
    r.insert(r.end(), retire.begin(), retire.end());
    sort_unique(r);
    for (const VertexId v : r) r_old[p].emplace_back(v, level.s_pre[v]);
    result.stats.ms_refinement += lap.lap();

    retire.clear();
    if (p + 1 < levels) {
      for (const VertexId sub : level.emptied) {
        if (level.members[sub].empty() && sub < state.levels[p + 1].num_vertices()) retire.push_back(sub);
      }
      sort_unique(retire);
      delta = inc_aggregation(level, delta, r);
    } else {
      for (const VertexId v : r) level.s_pre[v] = level.s_cur[v];
    }
    r_sets[p] = std::move(r);
    result.stats.ms_aggregation += lap.lap();
  }

  const auto f_log = def_update(state, movers, DeferredMap::kCommunities);
  auto root_sets = r_sets;
  for (std::size_t p = 0; p < levels; ++p) {
    root_sets[p].insert(root_sets[p].end(), arrivals[p].begin(), arrivals[p].end());
  }
  def_update(state, std::move(root_sets), DeferredMap::kRoots);

  for (std::size_t p = 0; p < levels; ++p) {
    const HitLevel& level = state.levels[p];
    std::unordered_map<VertexId, CommunityId> old_f;
    for (const auto& [v, c] : moved[p]) old_f.emplace(v, c);
    for (const auto& [v, c] : f_log[p]) old_f.emplace(v, c);
    std::unordered_set<VertexId> arrived(arrivals[p].begin(), arrivals[p].end());
    std::unordered_set<VertexId> affected(arrived);
    std::vector<std::pair<VertexId, CommunityId>> f_changes(old_f.begin(), old_f.end());
    std::sort(f_changes.begin(), f_changes.end());
    for (const auto& [v, c] : f_changes) {
      if (arrived.count(v) || level.f[v] == c) continue;
      affected.insert(v);
      result.changes.push_back({p + 1, v, false, c, level.f[v]});
    }
    for (const VertexId v : arrivals[p]) {
      result.changes.push_back({p + 1, v, false, kNoVertex, level.f[v]});
      result.changes.push_back({p + 1, v, true, kNoVertex, level.s_cur[v]});
    }
    for (const auto& [v, old] : r_old[p]) {
      affected.insert(v);
      if (arrived.count(v)) continue;
      result.changes.push_back({p + 1, v, true, old, level.s_cur[v]});
    }
    result.stats.levels[p].affected = affected.size() + stillborn[p];
  }
  result.stats.ms_total = total.lap();
  return result;
}

std::string change_feed_jsonl(const std::vector<ChangeRecord>& changes) {
  const auto value = [](VertexId x) { return x == kNoVertex ? nlohmann::json() : nlohmann::json(x); };
  std::string out;
  for (const auto& c : changes) {
    nlohmann::json line;
    line["level"] = c.level;
    line["vertex"] = c.vertex;
    line[c.sub ? "old_sub" : "old_community"] = value(c.old_value);
    line[c.sub ? "new_sub" : "new_community"] = value(c.new_value);
    out += line.dump();
    out += '\n';
  }
  return out;
}

}  // namespace dynleiden
