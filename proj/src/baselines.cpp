#include "dynleiden/baselines.hpp"

#include <algorithm>
#include <stdexcept>

#include "movement.hpp"

namespace dynleiden {

namespace {

std::size_t total_vertices(const Hierarchy& h) {
  std::size_t n = 0;
  for (const auto& level : h.levels) n += level.graph.num_vertices();
  return n;
}

std::size_t distinct_endpoints(const DeltaBatch& batch) {
  std::vector<VertexId> ends;
  for (const auto& d : batch) {
    ends.push_back(d.u);
    ends.push_back(d.v);
  }
  std::sort(ends.begin(), ends.end());
  return static_cast<std::size_t>(std::unique(ends.begin(), ends.end()) - ends.begin());
}

Hierarchy run_static(const Graph& g, const std::vector<CommunityId>& initial, std::size_t levels,
                     double gamma, PhaseTimes* times) {
  LeidenOptions options;
  options.levels = levels;
  options.gamma = gamma;
  return run_leiden(g, initial, options, times);
}

std::vector<CommunityId> warm_start(const std::vector<VertexId>& prev, std::size_t n) {
  std::vector<CommunityId> f(prev.begin(), prev.end());
  CommunityId next = 0;
  for (const CommunityId c : f) next = std::max(next, c + 1);
  while (f.size() < n) f.push_back(next++);
  f.resize(n);
  return f;
}

}  // namespace

std::string to_string(MaintainerKind kind) {
  switch (kind) {
    case MaintainerKind::kStatic:
      return "static";
    case MaintainerKind::kNaiveDynamic:
      return "nd";
    case MaintainerKind::kHit:
      return "hit";
  }
  return "unknown";
}

MaintainerKind parse_maintainer(const std::string& name) {
  if (name == "static") return MaintainerKind::kStatic;
  if (name == "nd") return MaintainerKind::kNaiveDynamic;
  if (name == "hit") return MaintainerKind::kHit;
  throw std::invalid_argument("unknown algorithm '" + name + "' (expected static, nd or hit)");
}

std::vector<VertexId> st_leiden_step(Graph& g, const DeltaBatch& batch, std::size_t levels,
                                     double gamma, PhaseTimes* times) {
  g.apply(batch);
  return run_static(g, {}, levels, gamma, times).membership();
}

std::vector<VertexId> nd_leiden_step(const std::vector<VertexId>& prev, Graph& g,
                                     const DeltaBatch& batch, std::size_t levels, double gamma,
                                     PhaseTimes* times) {
  g.apply(batch);
  const auto initial = g.num_vertices() ? warm_start(prev, g.num_vertices()) : std::vector<CommunityId>{};
  return run_static(g, initial, levels, gamma, times).membership();
}

Maintainer::Maintainer(MaintainerKind kind, const Graph& base, std::size_t levels, double gamma)
    : kind_(kind), levels_(levels), gamma_(gamma) {
  if (kind_ == MaintainerKind::kHit) {
    hit_ = build_hit_state(base, levels, gamma);
  } else {
    graph_ = base;
    membership_ = run_static(graph_, {}, levels, gamma, nullptr).membership();
  }
}

const Graph& Maintainer::graph() const {
  return kind_ == MaintainerKind::kHit ? hit_.levels.front().graph : graph_;
}

const std::vector<VertexId>& Maintainer::membership() const {
  return kind_ == MaintainerKind::kHit ? hit_.membership() : membership_;
}

StepReport Maintainer::step(const DeltaBatch& batch) {
  StepReport report;
  detail::Stopwatch clock;
  if (kind_ == MaintainerKind::kHit) {
    auto result = hit_leiden_step(hit_, batch);
    report.ms_total = clock.lap();
    report.times.movement_ms = result.stats.ms_movement;
    report.times.refinement_ms = result.stats.ms_refinement;
    report.times.aggregation_ms = result.stats.ms_aggregation;
    report.changed = result.stats.changed();
    report.affected = result.stats.affected();
    changes_ = std::move(result.changes);
    return report;
  }
  graph_.apply(batch);
  const auto initial = kind_ == MaintainerKind::kNaiveDynamic && graph_.num_vertices()
                           ? warm_start(membership_, graph_.num_vertices())
                           : std::vector<CommunityId>{};
  const Hierarchy h = run_static(graph_, initial, levels_, gamma_, &report.times);
  membership_ = h.membership();
  report.ms_total = clock.lap();
  report.changed = distinct_endpoints(batch);
  report.affected = total_vertices(h);
  return report;
}

}  // namespace dynleiden
