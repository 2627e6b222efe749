// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dynleiden/bench.hpp"
#include "dynleiden/gamma_density.hpp"
#include "dynleiden/hit_leiden.hpp"
#include "dynleiden/leiden.hpp"
#include "dynleiden/metrics.hpp"
#include "test_oracles.hpp"

using namespace dynleiden;

namespace {

using Blocks = std::vector<std::vector<VertexId>>;

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

int failures = 0;

void report(int id, const std::string& name, const Verdict& v, double seconds) {
  std::printf("%s criterion %d (%s) [%.1fs]%s%s\n", v.pass ? "PASS" : "FAIL", id, name.c_str(), seconds,
              v.detail.empty() ? "" : ": ", v.detail.c_str());
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

void run(int id, const std::string& name, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.fail(std::string("exception: ") + e.what());
  }
  report(id, name, v, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

oracle::EdgeMap nonzero(const oracle::EdgeMap& em) {
  oracle::EdgeMap out;
  for (const auto& [uv, w] : em) {
    if (std::abs(w) > 1e-9) out[uv] = w;
  }
  return out;
}

bool same_weights(const oracle::EdgeMap& a, const oracle::EdgeMap& b) {
  const auto pa = nonzero(a);
  const auto pb = nonzero(b);
  if (pa.size() != pb.size()) return false;
  for (const auto& [uv, w] : pa) {
    const auto it = pb.find(uv);
    if (it == pb.end() || std::abs(it->second - w) > 1e-9) return false;
  }
  return true;
}

bool all_connected(const Graph& g, const std::vector<VertexId>& membership) {
  for (const auto& [_, members] : oracle::groups(membership)) {
    if (!induced_connected(g, members)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Criteria 1-3: quality parity on planted partitions.

struct ParityOutcome {
  double worst_hit = 0.0;
  double worst_nd = 0.0;
  std::size_t communities = 0;
  std::size_t dense = 0;
  bool hit_connected = true;
  bool static_connected = true;
};

const ParityOutcome& parity_runs() {
  static const ParityOutcome outcome = [] {
    ParityOutcome out;
    for (std::uint64_t seed : {11u, 22u, 33u}) {
      std::vector<StreamEdge> stream;
      for (const auto& e : planted_partition({20, 100, 0.09, 0.0005, seed})) {
        stream.push_back({e.u, e.v, e.weight, std::nullopt});
      }
      BenchConfig config;
      config.batch_size = 100;
      config.batches = 9;
      config.seed = seed;
      config.timing = false;
      config.density_sample = 0;
      const BatchPlan plan = make_batches(stream, config);

      std::vector<std::vector<double>> q(3);
      const MaintainerKind kinds[] = {MaintainerKind::kStatic, MaintainerKind::kNaiveDynamic, MaintainerKind::kHit};
      for (int k = 0; k < 3; ++k) {
        Maintainer m(kinds[k], plan.initial, config.levels, config.gamma);
        if (!all_connected(m.graph(), m.membership())) {
          (kinds[k] == MaintainerKind::kHit ? out.hit_connected : out.static_connected) = false;
        }
        for (const auto& batch : plan.batches) {
          m.step(batch);
          const auto& membership = m.membership();
          const std::vector<CommunityId> f(membership.begin(), membership.end());
          q[k].push_back(modularity(m.graph(), f, config.gamma));
          const bool connected = all_connected(m.graph(), membership);
          if (kinds[k] == MaintainerKind::kStatic && !connected) out.static_connected = false;
          if (kinds[k] != MaintainerKind::kHit) continue;
          if (!connected) out.hit_connected = false;
          DensityBudget budget;
          budget.want_witness = false;
          for (const auto& [_, members] : oracle::groups(membership)) {
            ++out.communities;
            out.dense += verify_gamma_density(m.graph(), members, config.gamma, budget).dense;
          }
        }
      }
      for (std::size_t r = 0; r < q[0].size(); ++r) {
        out.worst_nd = std::max(out.worst_nd, std::abs(q[1][r] - q[0][r]));
        out.worst_hit = std::max(out.worst_hit, std::abs(q[2][r] - q[0][r]));
      }
    }
    return out;
  }();
  return outcome;
}

Verdict criterion_parity() {
  const auto& o = parity_runs();
  Verdict v;
  v.detail = "max |Q_HIT-Q_ST| = " + fmt(o.worst_hit) + ", max |Q_ND-Q_ST| = " + fmt(o.worst_nd);
  if (o.worst_hit > 0.01 || o.worst_nd > 0.01) v.pass = false;
  return v;
}

Verdict criterion_density() {
  const auto& o = parity_runs();
  Verdict v;
  const double pct = 100.0 * static_cast<double>(o.dense) / static_cast<double>(std::max<std::size_t>(1, o.communities));
  v.detail = fmt(pct) + "% of " + std::to_string(o.communities) + " HIT communities are gamma-dense";
  if (o.communities == 0 || pct < 99.0) v.pass = false;
  return v;
}

// ---------------------------------------------------------------------------
// Random dynamic sequences shared by criteria 3 and 6.

DeltaBatch random_batch(std::mt19937_64& rng, const Graph& g, std::size_t n) {
  DeltaBatch batch;
  const int size = 1 + static_cast<int>(rng() % 8);
  for (int i = 0; i < size; ++i) {
    const VertexId u = static_cast<VertexId>(rng() % n);
    VertexId v = static_cast<VertexId>(rng() % n);
    if (rng() % 20 == 0 && n < 100) v = static_cast<VertexId>(n + rng() % std::min<std::size_t>(3, 100 - n));
    const Weight w = g.has_vertex(v) ? g.weight(u, v) : 0.0;
    bool dup = false;
    for (const auto& d : batch) dup = dup || std::minmax(d.u, d.v) == std::minmax(u, v);
    if (dup) continue;
    batch.push_back({u, v, w > 0 && rng() % 2 ? -w : 1.0 + static_cast<double>(rng() % 3)});
  }
  return batch;
}

// Every supergraph equals a fresh aggregation of the level below under s_cur,
// and g^1 equals the composed s-chain.
std::string fidelity_error(const HitState& st) {
  const std::size_t levels = st.num_levels();
  for (std::size_t p = 0; p + 1 < levels; ++p) {
    const HitLevel& level = st.levels[p];
    std::vector<VertexId> s = level.s_cur;
    for (VertexId v = 0; v < s.size(); ++v) {
      if (s[v] == kNoVertex) {
        if (level.graph.degree(v) != 0.0) return "retired vertex with edges at level " + std::to_string(p + 1);
        s[v] = 0;
      }
    }
    if (!same_weights(oracle::aggregate(oracle::edge_map(level.graph), s), oracle::edge_map(st.levels[p + 1].graph))) {
      return "supergraph mismatch at level " + std::to_string(p + 2);
    }
  }
  for (VertexId v = 0; v < st.levels.front().num_vertices(); ++v) {
    VertexId x = v;
    for (std::size_t p = 0; p < levels; ++p) x = st.levels[p].s_cur[x];
    if (st.membership()[v] != x) return "g^1 differs from the s-chain at vertex " + std::to_string(v);
  }
  return {};
}

struct SequenceOutcome {
  std::size_t steps = 0;
  std::string fidelity;
  std::string connectivity;
};

const SequenceOutcome& random_sequences() {
  static const SequenceOutcome outcome = [] {
    SequenceOutcome out;
    std::mt19937_64 rng(20240601);
    for (int trial = 0; trial < 200; ++trial) {
      std::size_t n = 10 + rng() % 80;
      const Graph base = graph_from_edges(n, oracle::random_edges(rng, n, 0.1, 0.05));
      auto st = build_hit_state(base, 1 + rng() % 5);
      if (out.connectivity.empty() && !all_connected(base, st.membership())) {
        out.connectivity = "static build, trial " + std::to_string(trial);
      }
      for (int step = 0; step < 20; ++step) {
        const Graph g = st.levels.front().graph;
        const DeltaBatch batch = random_batch(rng, g, n);
        const Graph expected = apply_delta(g, batch);
        hit_leiden_step(st, batch);
        ++out.steps;
        n = st.levels.front().num_vertices();
        const std::string where = "trial " + std::to_string(trial) + " step " + std::to_string(step);
        if (out.fidelity.empty()) {
          if (!same_weights(oracle::edge_map(st.levels.front().graph), oracle::edge_map(expected))) {
            out.fidelity = "base graph drifted, " + where;
          } else if (auto e = fidelity_error(st); !e.empty()) {
            out.fidelity = e + ", " + where;
          }
        }
        if (out.connectivity.empty() && !all_connected(st.levels.front().graph, st.membership())) {
          out.connectivity = "HIT step, " + where;
        }
      }
    }
    return out;
  }();
  return outcome;
}

Verdict criterion_connectivity() {
  Verdict v;
  const auto& p = parity_runs();
  if (!p.static_connected) v.fail("disconnected static community on planted partitions");
  if (!p.hit_connected) v.fail("disconnected HIT community on planted partitions");
  const auto& s = random_sequences();
  if (!s.connectivity.empty()) v.fail("disconnected community: " + s.connectivity);
  if (v.pass) v.detail = "planted runs plus " + std::to_string(s.steps) + " random steps";
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 4: closed-form gain against exact modularity differences.

Verdict criterion_gain() {
  Verdict v;
  std::mt19937_64 rng(4242);
  int cases = 0;
  double worst = 0.0;
  while (cases < 1000) {
    const std::size_t n = 2 + rng() % 29;
    const auto edges = oracle::random_edges(rng, n, 0.25, 0.1);
    const Graph g = graph_from_edges(n, edges);
    if (g.total_weight() == 0.0) continue;
    std::vector<CommunityId> f(n);
    const std::size_t k = 1 + rng() % 6;
    for (auto& c : f) c = static_cast<CommunityId>(rng() % k);
    const Partition p(g, f);
    const VertexId x = static_cast<VertexId>(rng() % n);
    const auto em = oracle::edge_map(edges);
    const double gamma = 0.5 + static_cast<double>(rng() % 100) / 100.0;
    const double q_before = oracle::modularity(n, em, f, gamma);

    std::vector<CommunityId> targets = p.community_ids();
    targets.push_back(kEmptyCommunity);
    double best_gain = -std::numeric_limits<double>::infinity();
    double best_exact = -std::numeric_limits<double>::infinity();
    std::vector<double> exact(targets.size());
    CommunityId argmax_gain = kNoCommunity;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      auto after = f;
      after[x] = targets[i] == kEmptyCommunity ? static_cast<CommunityId>(n + 100) : targets[i];
      exact[i] = oracle::modularity(n, em, after, gamma) - q_before;
      const double gain = modularity_gain(g, p, x, targets[i], gamma);
      worst = std::max(worst, std::abs(exact[i] - 2.0 * gain));
      if (gain > best_gain) {
        best_gain = gain;
        argmax_gain = targets[i];
      }
      best_exact = std::max(best_exact, exact[i]);
    }
    const auto at = std::find(targets.begin(), targets.end(), argmax_gain) - targets.begin();
    if (exact[at] < best_exact - 1e-9) {
      v.fail("gain argmax is not an exact argmax in case " + std::to_string(cases));
    }
    ++cases;
  }
  if (worst > 1e-9) v.fail("max |dQ - 2*gain| = " + fmt(worst));
  if (v.pass) v.detail = "1000 cases, max |dQ - 2*gain| = " + fmt(worst);
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 5: every aggregated level carries the base modularity.

Verdict criterion_levels() {
  Verdict v;
  std::mt19937_64 rng(5005);
  double worst = 0.0;
  int built = 0;
  while (built < 100) {
    const std::size_t n = 5 + rng() % 60;
    const Graph g = graph_from_edges(n, oracle::random_edges(rng, n, 0.15, 0.1));
    if (g.total_weight() == 0.0) continue;
    LeidenOptions options;
    options.levels = 2 + rng() % 4;
    options.gamma = 0.5 + static_cast<double>(rng() % 100) / 100.0;
    const Hierarchy h = run_leiden(g, options);
    std::vector<VertexId> down(n);
    for (VertexId u = 0; u < n; ++u) down[u] = u;
    for (std::size_t p = 0; p < h.num_levels(); ++p) {
      const LevelState& level = h.levels[p];
      std::vector<CommunityId> base(n);
      for (VertexId u = 0; u < n; ++u) base[u] = level.f[down[u]];
      const double diff = std::abs(modularity(level.graph, std::span<const CommunityId>(level.f), options.gamma) -
                                   modularity(g, std::span<const CommunityId>(base), options.gamma));
      worst = std::max(worst, diff);
      for (VertexId u = 0; u < n; ++u) down[u] = level.s[down[u]];
    }
    ++built;
  }
  v.detail = "100 hierarchies, max difference " + fmt(worst);
  v.pass = worst <= 1e-9;
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 6: structural fidelity of incremental maintenance.

Verdict criterion_fidelity() {
  Verdict v;
  const auto& s = random_sequences();
  if (!s.fidelity.empty()) v.fail(s.fidelity);
  if (v.pass) v.detail = "200 sequences, " + std::to_string(s.steps) + " steps";
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 7: golden examples on the eight-vertex running example.

// Three-level hierarchy of the running example, ids 0-based per level.
const char* kRunningExample = R"({
  "gamma": 1.0,
  "levels": [
    {"num_vertices": 8, "f": [0,0,1,1,1,1,1,1], "s": [0,0,1,1,2,2,3,3],
     "edges": [[0,1,1],[2,3,1],[2,4,1],[4,5,1],[5,6,1],[6,7,1],[4,6,1],[5,7,1]]},
    {"num_vertices": 4, "f": [0,1,1,1], "s": [0,1,1,1],
     "edges": [[0,0,1],[1,1,1],[1,2,1],[2,2,1],[2,3,3],[3,3,1]]},
    {"num_vertices": 2, "f": [0,1], "s": [0,1],
     "edges": [[0,0,1],[1,1,7]]}
  ]
})";

Verdict criterion_golden() {
  Verdict v;
  const DeltaBatch batch{{0, 2, 1.0}, {2, 4, -1.0}};
  const Graph g = graph_from_edges(8, oracle::canonical_edges());

  // Communities before and after inserting (v1,v3) and deleting (v3,v5).
  auto st = hit_state_from_hierarchy(hierarchy_from_json(kRunningExample));
  if (oracle::blocks(st.membership()) != Blocks{{0, 1}, {2, 3, 4, 5, 6, 7}}) v.fail("communities before the update");
  const auto res = hit_leiden_step(st, batch);
  if (oracle::blocks(st.membership()) != Blocks{{0, 1, 2, 3}, {4, 5, 6, 7}}) v.fail("communities after the update");
  if (res.level_deltas.size() != 3 || res.level_deltas[2] != DeltaBatch{{0, 0, 2.0}, {1, 1, -2.0}}) {
    v.fail("top-level superedge changes of the HIT step");
  }

  // First static iteration: movement gives {v1,v2},{v3,v4},{v5..v8}; refinement
  // splits the last into {v5,v6} and {v7,v8}.
  LevelState level;
  level.graph = g;
  level.f.resize(8);
  for (VertexId u = 0; u < 8; ++u) level.f[u] = u;
  CommunityId next = 8;
  move_phase(level, 1.0, next);
  if (oracle::blocks(level.f) != Blocks{{0, 1}, {2, 3}, {4, 5, 6, 7}}) v.fail("first movement phase");
  refine_phase(level, 1.0);
  if (oracle::blocks(level.s) != Blocks{{0, 1}, {2, 3}, {4, 5}, {6, 7}}) v.fail("sub-community split of {v5..v8}");

  // A triangle sub-community loses v2, by edge deletions or by a move.
  const Graph tri = graph_from_edges(3, std::vector<WeightedEdge>{{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
  const std::vector<VertexId> one{0, 0, 0};
  {
    auto psi = build_cc_index(tri, one);
    std::vector<VertexId> k;
    for (const auto [a, b] : {std::pair<VertexId, VertexId>{0, 1}, {1, 2}}) {
      if (psi.update_edge(a, b, -1)) {
        k.push_back(a);
        k.push_back(b);
      }
    }
    const auto comps = extract_split_components(psi, one, k);
    if (comps.size() != 2 || !comps[0].keeps_original_id || comps[0].vertices != std::vector<VertexId>{0, 2} ||
        comps[1].vertices != std::vector<VertexId>{1}) {
      v.fail("split by edge deletions");
    }
  }
  {
    auto psi = build_cc_index(tri, one);
    const auto k = psi.isolate(1);
    const auto comps = extract_split_components(psi, one, k);
    if (comps.size() != 2 || !comps[0].keeps_original_id || comps[0].vertices != std::vector<VertexId>{0, 2} ||
        comps[1].vertices != std::vector<VertexId>{1}) {
      v.fail("split by vertex removal");
    }
  }

  // Superedge changes with C1, C2 as supervertices when v3, v4 move to C1.
  HitLevel communities;
  communities.graph = apply_delta(g, batch);
  communities.s_pre = {0, 0, 1, 1, 1, 1, 1, 1};
  communities.s_cur = {0, 0, 0, 0, 1, 1, 1, 1};
  const std::vector<VertexId> r{2, 3};
  if (inc_aggregation(communities, batch, r) != DeltaBatch{{0, 0, 2.0}, {1, 1, -2.0}}) {
    v.fail("compressed superedge changes");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 8: speed against the static baseline.

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t k = xs.size();
  return k % 2 ? xs[k / 2] : 0.5 * (xs[k / 2 - 1] + xs[k / 2]);
}

Verdict criterion_speed() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<StreamEdge> stream;
  for (const auto& e : planted_partition({200, 200, 0.04, 0.00005, 8})) {
    stream.push_back({e.u, e.v, e.weight, std::nullopt});
  }
  BenchConfig config;
  config.batch_size = 10;
  config.batches = 9;
  config.seed = 8;
  config.density_sample = 0;
  const BatchPlan plan = make_batches(stream, config);
  std::map<MaintainerKind, double> medians;
  for (auto kind : {MaintainerKind::kStatic, MaintainerKind::kHit}) {
    config.algorithm = kind;
    std::vector<double> ms;
    for (const auto& r : run_benchmark(plan, config)) {
      if (!r.warmup) ms.push_back(r.ms_total);
    }
    medians[kind] = median(ms);
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Verdict v;
  const double st = medians[MaintainerKind::kStatic];
  const double hit = medians[MaintainerKind::kHit];
  v.detail = std::to_string(stream.size()) + " edges, median ST " + fmt(st) + " ms, median HIT " + fmt(hit) +
             " ms (" + fmt(st / std::max(hit, 1e-9)) + "x), total " + fmt(total) + " s";
  v.pass = hit * 5.0 <= st && total < 600.0;
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 9: an empty batch is a no-op.

Verdict criterion_noop() {
  Verdict v;
  std::mt19937_64 rng(909);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 10 + rng() % 80;
    auto st = build_hit_state(graph_from_edges(n, oracle::random_edges(rng, n, 0.1)), 1 + rng() % 5);
    for (int step = 0; step < 3; ++step) hit_leiden_step(st, random_batch(rng, st.levels.front().graph, n));
    const HitState before = st;
    const auto res = hit_leiden_step(st, {});
    if (res.stats.changed() != 0 || res.stats.affected() != 0) v.fail("nonzero counters");
    if (!res.changes.empty()) v.fail("change records on an empty batch");
    for (std::size_t p = 0; p < st.num_levels(); ++p) {
      const auto& a = before.levels[p];
      const auto& b = st.levels[p];
      if (a.f != b.f || a.s_cur != b.s_cur || a.g != b.g) v.fail("membership changed at level " + std::to_string(p + 1));
    }
  }
  if (v.pass) v.detail = "50 states";
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 10: byte-identical reports.

Verdict criterion_determinism() {
  Verdict v;
  std::vector<StreamEdge> stream;
  for (const auto& e : planted_partition({10, 50, 0.2, 0.002, 10})) stream.push_back({e.u, e.v, e.weight, std::nullopt});
  for (auto kind : {MaintainerKind::kStatic, MaintainerKind::kNaiveDynamic, MaintainerKind::kHit}) {
    for (bool deletions : {false, true}) {
      BenchConfig config;
      config.algorithm = kind;
      config.batch_size = 50;
      config.batches = 9;
      config.seed = 10;
      config.with_deletions = deletions;
      config.timing = false;
      const auto once = emit_report(run_benchmark(make_batches(stream, config), config), ReportFormat::kCsv);
      const auto twice = emit_report(run_benchmark(make_batches(stream, config), config), ReportFormat::kCsv);
      if (once != twice) v.fail(to_string(kind) + " CSV differs between runs");
      // With timing on, everything but the timing columns must still agree.
      config.timing = true;
      auto timed = run_benchmark(make_batches(stream, config), config);
      for (auto& r : timed) r.ms_movement = r.ms_refinement = r.ms_aggregation = r.ms_total = 0.0;
      if (emit_report(timed, ReportFormat::kCsv) != once) v.fail(to_string(kind) + " non-timing columns differ");
    }
  }
  if (v.pass) v.detail = "3 algorithms, with and without deletions";
  return v;
}

}  // namespace

int main() {
  run(1, "modularity parity", criterion_parity);
  run(2, "subpartition gamma-density", criterion_density);
  run(3, "connectivity", criterion_connectivity);
  run(4, "gain oracle", criterion_gain);
  run(5, "level consistency", criterion_levels);
  run(6, "structural fidelity", criterion_fidelity);
  run(7, "golden examples", criterion_golden);
  run(8, "desk-scale speed", criterion_speed);
  run(9, "no-op stability", criterion_noop);
  run(10, "determinism", criterion_determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
