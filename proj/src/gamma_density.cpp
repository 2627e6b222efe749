#include "dynleiden/gamma_density.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "dynleiden/metrics.hpp"

namespace dynleiden {

namespace {

constexpr std::size_t kMaxExhaustive = 8;

// The community restricted to its own vertices, with local ids 0..k-1.
struct Local {
  std::vector<VertexId> ids;
  std::vector<Weight> degree;
  std::vector<std::vector<std::pair<std::size_t, Weight>>> adj;
  Weight total_degree = 0.0;
  Weight two_m = 0.0;
  double gamma = 1.0;

  bool mergeable(Weight w, Weight dx, Weight dy) const {
    if (w <= 0.0) return false;
    const double lhs = two_m * w;
    const double rhs = gamma * dx * dy;
    return lhs >= rhs - 1e-12 * std::max({1.0, lhs, rhs});
  }

  // ΔQ(X→∅) <= 0 for a set with degree dx and weight ext to the rest.
  bool locally_optimized(Weight ext, Weight dx) const {
    const double gain = -ext / two_m + gamma * dx * (total_degree - dx) / (two_m * two_m);
    return gain <= kGainTolerance;
  }
};

Local make_local(const Graph& g, std::span<const VertexId> members, double gamma) {
  Local l;
  l.ids.assign(members.begin(), members.end());
  std::sort(l.ids.begin(), l.ids.end());
  l.ids.erase(std::unique(l.ids.begin(), l.ids.end()), l.ids.end());
  std::unordered_map<VertexId, std::size_t> index;
  for (std::size_t i = 0; i < l.ids.size(); ++i) index.emplace(l.ids[i], i);
  l.degree.resize(l.ids.size());
  l.adj.resize(l.ids.size());
  for (std::size_t i = 0; i < l.ids.size(); ++i) {
    l.degree[i] = g.degree(l.ids[i]);
    l.total_degree += l.degree[i];
    for (const auto& n : g.neighbors(l.ids[i])) {
      auto it = index.find(n.id);
      if (it != index.end()) l.adj[i].emplace_back(it->second, n.weight);
    }
  }
  l.two_m = 2.0 * g.total_weight();
  l.gamma = gamma;
  return l;
}

Weight external_weight(const Local& l, std::size_t i) {
  Weight ext = 0.0;
  for (const auto& [_, w] : l.adj[i]) ext += w;
  return ext;
}

bool singletons_optimized(const Local& l) {
  for (std::size_t i = 0; i < l.ids.size(); ++i) {
    if (!l.locally_optimized(external_weight(l, i), l.degree[i])) return false;
  }
  return true;
}

std::vector<VertexId> to_vertices(const Local& l, const std::vector<std::size_t>& seq) {
  std::vector<VertexId> out;
  out.reserve(seq.size());
  for (const std::size_t i : seq) out.push_back(l.ids[i]);
  return out;
}

// Subset tables for sets of at most kMaxExhaustive vertices.
struct MaskTables {
  std::vector<Weight> inner;  // weight of edges inside the mask
  std::vector<Weight> degree;

  explicit MaskTables(const Local& l) {
    const std::size_t k = l.ids.size();
    const std::size_t full = std::size_t{1} << k;
    inner.assign(full, 0.0);
    degree.assign(full, 0.0);
    std::vector<std::vector<Weight>> w(k, std::vector<Weight>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
      for (const auto& [j, wt] : l.adj[i]) w[i][j] = wt;
    }
    for (std::size_t mask = 1; mask < full; ++mask) {
      const std::size_t b = static_cast<std::size_t>(std::countr_zero(mask));
      const std::size_t rest = mask & (mask - 1);
      degree[mask] = degree[rest] + l.degree[b];
      Weight add = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        if (rest >> j & 1) add += w[b][j];
      }
      inner[mask] = inner[rest] + add;
    }
  }

  Weight between(std::size_t x, std::size_t y) const { return inner[x | y] - inner[x] - inner[y]; }
};

struct ExhaustiveSearch {
  const Local& l;
  MaskTables tables;
  std::size_t full;
  std::unordered_set<std::uint64_t> failed;
  std::vector<std::pair<std::size_t, std::size_t>> path;  // merged (x, y) masks

  explicit ExhaustiveSearch(const Local& local)
      : l(local), tables(local), full((std::size_t{1} << local.ids.size()) - 1) {}

  static std::uint64_t key(std::vector<std::size_t> blocks) {
    std::sort(blocks.begin(), blocks.end());
    std::uint64_t k = 0;
    for (const std::size_t b : blocks) k = k << 8 | b;
    return k;
  }

  bool valid(std::size_t x, std::size_t y) const {
    const std::size_t xy = x | y;
    const Weight ext = tables.inner[full] - tables.inner[xy] - tables.inner[full ^ xy];
    return l.mergeable(tables.between(x, y), tables.degree[x], tables.degree[y]) &&
           l.locally_optimized(ext, tables.degree[xy]);
  }

  bool run(std::vector<std::size_t>& blocks) {
    if (blocks.size() == 1) return true;
    const std::uint64_t k = key(blocks);
    if (failed.contains(k)) return false;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      for (std::size_t j = i + 1; j < blocks.size(); ++j) {
        const std::size_t x = blocks[i];
        const std::size_t y = blocks[j];
        if (!valid(x, y)) continue;
        std::vector<std::size_t> next;
        next.reserve(blocks.size() - 1);
        for (std::size_t t = 0; t < blocks.size(); ++t) {
          if (t != i && t != j) next.push_back(blocks[t]);
        }
        next.push_back(x | y);
        path.emplace_back(x, y);
        if (run(next)) return true;
        path.pop_back();
      }
    }
    failed.insert(k);
    return false;
  }
};

std::vector<std::size_t> mask_members(std::size_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; mask >> i; ++i) {
    if (mask >> i & 1) out.push_back(i);
  }
  return out;
}

DensityResult exhaustive(const Local& l, bool want_witness) {
  DensityResult result;
  result.exhaustive = true;
  ExhaustiveSearch search(l);
  std::vector<std::size_t> blocks;
  for (std::size_t i = 0; i < l.ids.size(); ++i) blocks.push_back(std::size_t{1} << i);
  result.dense = search.run(blocks);
  if (result.dense && want_witness) {
    GammaOrder order;
    std::unordered_map<std::size_t, std::vector<std::size_t>> seq;
    for (const std::size_t b : blocks) seq[b] = mask_members(b);
    for (const auto& [x, y] : search.path) {
      MergeEvent e;
      e.x = to_vertices(l, seq[x]);
      e.y = to_vertices(l, seq[y]);
      auto merged = seq[x];
      merged.insert(merged.end(), seq[y].begin(), seq[y].end());
      e.merged = to_vertices(l, merged);
      e.w_xy = search.tables.between(x, y);
      e.d_x = search.tables.degree[x];
      e.d_y = search.tables.degree[y];
      seq[x | y] = std::move(merged);
      order.events.push_back(std::move(e));
    }
    result.witness = std::move(order);
  }
  return result;
}

struct Candidate {
  double key;
  std::size_t a;
  std::size_t b;
  std::uint32_t version_a;
  std::uint32_t version_b;

  bool operator<(const Candidate& o) const {
    if (key != o.key) return key < o.key;
    if (a != o.a) return a > o.a;
    return b > o.b;
  }
};

// One agglomeration attempt. restart 0 ranks purely by merge margin; later
// restarts perturb the ranking.
std::optional<GammaOrder> greedy_attempt(const Local& l, std::size_t restart, std::uint64_t seed,
                                         bool want_witness, bool& ok) {
  const std::size_t k = l.ids.size();
  std::vector<std::unordered_map<std::size_t, Weight>> adj(k);
  std::vector<Weight> degree = l.degree;
  std::vector<Weight> ext(k, 0.0);
  std::vector<std::uint32_t> version(k, 0);
  std::vector<std::vector<std::size_t>> seq(want_witness ? k : 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (const auto& [j, w] : l.adj[i]) adj[i][j] += w;
    ext[i] = external_weight(l, i);
    if (want_witness) seq[i] = {i};
  }
  std::mt19937_64 rng(seed + restart);
  std::uniform_real_distribution<double> jitter(0.5, 1.5);
  std::priority_queue<Candidate> heap;
  const auto offer = [&](std::size_t a, std::size_t b) {
    const Weight w = adj[a].at(b);
    if (!l.mergeable(w, degree[a], degree[b])) return;
    if (!l.locally_optimized(ext[a] + ext[b] - 2.0 * w, degree[a] + degree[b])) return;
    double margin = l.two_m * w - l.gamma * degree[a] * degree[b];
    if (restart > 0) margin = std::max(margin, 0.0) * jitter(rng);
    heap.push({margin, a, b, version[a], version[b]});
  };
  for (std::size_t a = 0; a < k; ++a) {
    std::vector<std::size_t> nbrs;
    for (const auto& [b, _] : adj[a]) {
      if (a < b) nbrs.push_back(b);
    }
    std::sort(nbrs.begin(), nbrs.end());
    for (const std::size_t b : nbrs) offer(a, b);
  }
  GammaOrder order;
  std::size_t clusters = k;
  while (!heap.empty() && clusters > 1) {
    const Candidate c = heap.top();
    heap.pop();
    if (version[c.a] != c.version_a || version[c.b] != c.version_b) continue;
    const Weight w = adj[c.a].at(c.b);
    // Small-to-large: fold the cluster with fewer neighbours into the other.
    std::size_t keep = c.a;
    std::size_t gone = c.b;
    if (adj[keep].size() < adj[gone].size()) std::swap(keep, gone);
    if (want_witness) {
      MergeEvent e;
      e.x = to_vertices(l, seq[c.a]);
      e.y = to_vertices(l, seq[c.b]);
      e.w_xy = w;
      e.d_x = degree[c.a];
      e.d_y = degree[c.b];
      auto merged = seq[c.a];
      merged.insert(merged.end(), seq[c.b].begin(), seq[c.b].end());
      e.merged = to_vertices(l, merged);
      order.events.push_back(std::move(e));
      seq[gone].clear();
      seq[keep] = std::move(merged);
    }
    for (const auto& [nb, wt] : adj[gone]) {
      if (nb == keep) continue;
      adj[keep][nb] += wt;
      adj[nb][keep] += wt;
      adj[nb].erase(gone);
    }
    adj[keep].erase(gone);
    adj[gone].clear();
    degree[keep] += degree[gone];
    ext[keep] = ext[keep] + ext[gone] - 2.0 * w;
    ++version[keep];
    ++version[gone];
    --clusters;
    std::vector<std::size_t> nbrs;
    for (const auto& [nb, _] : adj[keep]) nbrs.push_back(nb);
    std::sort(nbrs.begin(), nbrs.end());
    for (const std::size_t nb : nbrs) offer(keep, nb);
  }
  ok = clusters == 1;
  if (!ok || !want_witness) return std::nullopt;
  return order;
}

DensityResult greedy(const Local& l, const DensityBudget& budget) {
  DensityResult result;
  const std::size_t attempts = std::max<std::size_t>(1, budget.restarts);
  for (std::size_t r = 0; r < attempts; ++r) {
    bool ok = false;
    auto witness = greedy_attempt(l, r, budget.seed, budget.want_witness, ok);
    if (ok) {
      result.dense = true;
      result.witness = std::move(witness);
      return result;
    }
  }
  return result;
}

}  // namespace

DensityResult verify_gamma_density(const Graph& g, std::span<const VertexId> members,
                                   double gamma, const DensityBudget& budget) {
  const Local l = make_local(g, members, gamma);
  if (l.ids.empty()) throw std::invalid_argument("empty vertex set");
  DensityResult result;
  if (l.ids.size() == 1 || l.two_m <= 0.0) {
    result.dense = l.ids.size() == 1;
    result.exhaustive = true;
    if (result.dense && budget.want_witness) result.witness = GammaOrder{};
    return result;
  }
  if (!singletons_optimized(l)) {
    result.exhaustive = l.ids.size() <= std::min(budget.exhaustive_limit, kMaxExhaustive);
    return result;
  }
  if (l.ids.size() <= std::min(budget.exhaustive_limit, kMaxExhaustive)) {
    return exhaustive(l, budget.want_witness);
  }
  return greedy(l, budget);
}

DensityResult verify_gamma_density(const Graph& g, const Partition& p, CommunityId c,
                                   double gamma, const DensityBudget& budget) {
  return verify_gamma_density(g, p.community(c).members, gamma, budget);
}

namespace {

void enumerate(const Local& l, std::vector<std::vector<std::size_t>>& blocks,
               std::set<std::vector<VertexId>>& out) {
  if (blocks.size() == 1) {
    out.insert(to_vertices(l, blocks.front()));
    return;
  }
  const auto stats = [&](const std::vector<std::size_t>& b) {
    Weight d = 0.0;
    for (const std::size_t i : b) d += l.degree[i];
    return d;
  };
  const auto between = [&](const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
    Weight w = 0.0;
    for (const std::size_t i : x) {
      for (const auto& [j, wt] : l.adj[i]) {
        if (std::find(y.begin(), y.end(), j) != y.end()) w += wt;
      }
    }
    return w;
  };
  const auto external = [&](const std::vector<std::size_t>& x) {
    Weight w = 0.0;
    for (const std::size_t i : x) {
      for (const auto& [j, wt] : l.adj[i]) {
        if (std::find(x.begin(), x.end(), j) == x.end()) w += wt;
      }
    }
    return w;
  };
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      if (i == j) continue;
      const auto& x = blocks[i];
      const auto& y = blocks[j];
      const Weight w = between(x, y);
      if (!l.mergeable(w, stats(x), stats(y))) continue;
      auto merged = x;
      merged.insert(merged.end(), y.begin(), y.end());
      if (!l.locally_optimized(external(merged), stats(merged))) continue;
      std::vector<std::vector<std::size_t>> next;
      for (std::size_t t = 0; t < blocks.size(); ++t) {
        if (t != i && t != j) next.push_back(blocks[t]);
      }
      next.push_back(std::move(merged));
      enumerate(l, next, out);
    }
  }
}

}  // namespace

std::vector<std::vector<VertexId>> enumerate_gamma_orders(const Graph& g,
                                                          std::span<const VertexId> members,
                                                          double gamma) {
  const Local l = make_local(g, members, gamma);
  if (l.ids.size() > kMaxExhaustive) throw std::invalid_argument("too many vertices to enumerate");
  if (l.ids.empty()) return {};
  if (l.ids.size() > 1 && (l.two_m <= 0.0 || !singletons_optimized(l))) return {};
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < l.ids.size(); ++i) blocks.push_back({i});
  std::set<std::vector<VertexId>> out;
  enumerate(l, blocks, out);
  return {out.begin(), out.end()};
}

double set_removal_gain(const Graph& g, std::span<const VertexId> x,
                        std::span<const VertexId> whole, double gamma) {
  const std::unordered_set<VertexId> in_x(x.begin(), x.end());
  const std::unordered_set<VertexId> in_whole(whole.begin(), whole.end());
  Weight d_x = 0.0;
  Weight d_whole = 0.0;
  Weight ext = 0.0;
  for (const VertexId v : in_whole) d_whole += g.degree(v);
  for (const VertexId v : in_x) {
    d_x += g.degree(v);
    for (const auto& n : g.neighbors(v)) {
      if (in_whole.contains(n.id) && !in_x.contains(n.id)) ext += n.weight;
    }
  }
  const double two_m = 2.0 * g.total_weight();
  return -ext / two_m + gamma * d_x * (d_whole - d_x) / (two_m * two_m);
}

bool check_gamma_order(const Graph& g, std::span<const VertexId> members, const GammaOrder& order,
                       double gamma) {
  std::vector<VertexId> whole(members.begin(), members.end());
  std::sort(whole.begin(), whole.end());
  whole.erase(std::unique(whole.begin(), whole.end()), whole.end());
  std::set<std::vector<VertexId>> blocks;
  for (const VertexId v : whole) {
    if (set_removal_gain(g, std::vector<VertexId>{v}, whole, gamma) > kGainTolerance) return false;
    blocks.insert({v});
  }
  const double two_m = 2.0 * g.total_weight();
  for (const auto& e : order.events) {
    if (!blocks.contains(e.x) || !blocks.contains(e.y) || e.x == e.y) return false;
    std::vector<VertexId> merged = e.x;
    merged.insert(merged.end(), e.y.begin(), e.y.end());
    if (merged != e.merged) return false;
    Weight w = 0.0;
    Weight d_x = 0.0;
    Weight d_y = 0.0;
    for (const VertexId v : e.x) {
      d_x += g.degree(v);
      w += weight_to_set(g, v, e.y);
    }
    for (const VertexId v : e.y) d_y += g.degree(v);
    if (w <= 0.0 || two_m * w < gamma * d_x * d_y - 1e-9 * std::max(1.0, two_m * w)) return false;
    if (set_removal_gain(g, merged, whole, gamma) > kGainTolerance) return false;
    blocks.erase(e.x);
    blocks.erase(e.y);
    blocks.insert(merged);
  }
  if (blocks.size() != 1) return false;
  auto last = *blocks.begin();
  std::sort(last.begin(), last.end());
  return last == whole;
}

std::vector<CommunityVerdict> verify_partition(const Graph& g, const Partition& p, double gamma,
                                               const DensityBudget& budget) {
  std::vector<CommunityVerdict> out;
  for (const CommunityId c : p.community_ids()) {
    const auto& members = p.community(c).members;
    const auto density = verify_gamma_density(g, members, gamma, budget);
    out.push_back({c, members.size(), induced_connected(g, members), density.dense,
                   density.witness ? density.witness->events.size() : 0});
  }
  return out;
}

std::string verdicts_to_json(std::span<const CommunityVerdict> verdicts) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : verdicts) {
    out.push_back({{"community_id", v.community},
                   {"size", v.size},
                   {"connected", v.connected},
                   {"gamma_dense", v.gamma_dense},
                   {"witness_length", v.witness_length}});
  }
  return out.dump();
}

}  // namespace dynleiden
