#include "dynleiden/metrics.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "dynleiden/errors.hpp"

namespace dynleiden {

double modularity(const Graph& g, const Partition& p, double gamma) {
  const Weight m = g.total_weight();
  if (m <= 0.0) throw EmptyGraph();
  const double two_m = 2.0 * m;
  double q = 0.0;
  for (const CommunityId c : p.community_ids()) {
    const auto& com = p.community(c);
    q += 2.0 * com.internal / two_m - gamma * (com.degree / two_m) * (com.degree / two_m);
  }
  return q;
}

double modularity(const Graph& g, std::span<const CommunityId> membership, double gamma) {
  const Weight m = g.total_weight();
  if (m <= 0.0) throw EmptyGraph();
  if (membership.size() != g.num_vertices()) {
    throw Error("membership size does not match the vertex count");
  }
  std::unordered_map<CommunityId, std::pair<Weight, Weight>> agg;  // internal, degree
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    auto& [internal, degree] = agg[membership[v]];
    degree += g.degree(v);
    internal += 2.0 * g.self_loop(v);
    for (const auto& n : g.neighbors(v)) {
      if (membership[n.id] == membership[v]) internal += n.weight;
    }
  }
  const double two_m = 2.0 * m;
  double q = 0.0;
  for (const auto& [c, a] : agg) {
    q += a.first / two_m - gamma * (a.second / two_m) * (a.second / two_m);
  }
  return q;
}

double modularity_gain(const Graph& g, const Partition& p, VertexId v, CommunityId target,
                       double gamma) {
  const CommunityId from = p.community_of(v);
  if (target != kEmptyCommunity && !p.has_community(target)) throw UnknownCommunity(target);
  if (target == from) return 0.0;
  const Weight m = g.total_weight();
  if (m <= 0.0) return 0.0;
  Weight w_to = 0.0;
  Weight w_from = 0.0;
  for (const auto& n : g.neighbors(v)) {
    const CommunityId c = p.community_of(n.id);
    if (c == from) w_from += n.weight;
    else if (c == target) w_to += n.weight;
  }
  const Weight d_to = target == kEmptyCommunity ? 0.0 : p.community(target).degree;
  return gain_formula(w_to, w_from, g.degree(v), p.community(from).degree, d_to, m, gamma);
}

bool induced_connected(const Graph& g, std::span<const VertexId> members) {
  if (members.size() <= 1) return true;
  std::unordered_set<VertexId> inside(members.begin(), members.end());
  std::unordered_set<VertexId> seen{members.front()};
  std::deque<VertexId> queue{members.front()};
  while (!queue.empty()) {
    const VertexId x = queue.front();
    queue.pop_front();
    for (const auto& n : g.neighbors(x)) {
      if (inside.contains(n.id) && seen.insert(n.id).second) queue.push_back(n.id);
    }
  }
  return seen.size() == inside.size();
}

std::vector<ConnectivityReport> check_connectivity(const Graph& g, const Partition& p) {
  std::vector<ConnectivityReport> out;
  for (const CommunityId c : p.community_ids()) {
    const auto& members = p.community(c).members;
    out.push_back({c, members.size(), induced_connected(g, members)});
  }
  return out;
}

double vertex_optimality_fraction(const Graph& g, const Partition& p, double gamma) {
  const std::size_t n = g.num_vertices();
  if (n == 0) return 1.0;
  std::size_t optimal = 0;
  for (VertexId v = 0; v < n; ++v) {
    double best = modularity_gain(g, p, v, kEmptyCommunity, gamma);
    for (const auto& nb : g.neighbors(v)) {
      best = std::max(best, modularity_gain(g, p, v, p.community_of(nb.id), gamma));
    }
    if (best <= kGainTolerance) ++optimal;
  }
  return static_cast<double>(optimal) / static_cast<double>(n);
}

namespace {

// alpha > m - gamma d(x) d(U) / (2 w(x,U)); unsatisfiable without an edge to U.
bool far_threshold(const LemmaParams& p) {
  if (p.w_vu <= 0.0) return false;
  return p.alpha > p.m - p.gamma * p.d_v * p.d_u / (2.0 * p.w_vu);
}

}  // namespace

bool lemma_threshold(LemmaCase kind, const LemmaParams& p) {
  if (p.alpha < 0.0 || p.d_v < 0.0 || p.d_u < 0.0 || p.w_vu < 0.0 || p.d_i < 0.0 ||
      p.gamma <= 0.0) {
    throw std::invalid_argument("lemma parameters must be nonnegative");
  }
  if (p.m <= 0.0) throw std::invalid_argument("lemma parameters need m > 0");
  switch (kind) {
    case LemmaCase::kIntraDeletion1:
      return p.alpha >
             (2.0 * p.m * p.w_vu - p.gamma * p.d_v * p.d_u) / (4.0 * p.m + 2.0 * p.w_vu);
    case LemmaCase::kIntraDeletion2:
    case LemmaCase::kIntraDeletion3:
    case LemmaCase::kIntraDeletion4:
    case LemmaCase::kCrossDeletion1:
    case LemmaCase::kCrossDeletion2:
    case LemmaCase::kCrossDeletion3:
    case LemmaCase::kCrossDeletion4:
      return far_threshold(p);
    case LemmaCase::kInsertion1:
    case LemmaCase::kInsertion2: {
      if (p.d_u == 0.0) throw DivisionByZero("d(U) is zero");
      const bool via_degree = p.alpha > 2.0 * p.w_vu / (p.gamma * p.d_u) * p.m - p.d_v;
      if (kind == LemmaCase::kInsertion2) return via_degree;
      return p.alpha > 4.0 / p.gamma * p.m - p.d_i || via_degree;
    }
    case LemmaCase::kInsertion3:
      if (p.d_v == 0.0) throw DivisionByZero("d(v) is zero");
      return p.alpha > p.w_vu / (p.gamma * p.d_v) * p.m - 0.5 * p.d_u;
    case LemmaCase::kInsertion4:
      return false;
  }
  return false;
}

}  // namespace dynleiden
