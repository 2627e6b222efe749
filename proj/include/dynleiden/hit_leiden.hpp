#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dynleiden/cc_index.hpp"
#include "dynleiden/degree_table.hpp"
#include "dynleiden/graph.hpp"
#include "dynleiden/leiden.hpp"

namespace dynleiden {

/// Persistent state of one hierarchy level.
///
/// Sub-community ids at level p are vertex ids of level p+1 (top-level labels
/// at the last level). A vertex whose sub-community emptied is retired: it
/// keeps its id but has no edges and s_cur == s_pre == kNoVertex.
struct HitLevel {
  Graph graph;
  std::vector<CommunityId> f;
  std::vector<VertexId> s_pre;
  std::vector<VertexId> s_cur;
  std::vector<VertexId> g;
  CCIndex psi;

  DegreeTable community_degree;
  /// Members of each sub-community id, and each vertex's slot in that list.
  std::vector<std::vector<VertexId>> members;
  std::vector<std::uint32_t> slot;
  std::vector<Weight> sub_degree;
  /// Next unused sub-community id.
  VertexId next_sub = 0;
  /// Sub-communities that lost their last member during the current step.
  std::vector<VertexId> emptied;

  std::size_t num_vertices() const { return f.size(); }
  bool retired(VertexId v) const { return s_cur[v] == kNoVertex; }
};

struct HitState {
  std::vector<HitLevel> levels;
  double gamma = 1.0;
  CommunityId next_community = 0;

  std::size_t num_levels() const { return levels.size(); }
  /// Base-level membership g^1.
  const std::vector<VertexId>& membership() const { return levels.front().g; }
};

/// Runs static Leiden, aligns f^p with the levels above, and builds Ψ^p.
HitState build_hit_state(const Graph& g, std::size_t levels, double gamma = 1.0);
/// State over an existing hierarchy, taken as is.
HitState hit_state_from_hierarchy(const Hierarchy& h);
/// Hierarchy view of the state with s = s_cur.
Hierarchy hierarchy_view(const HitState& state);

/// Moves v into sub-community `sub` (kNoVertex detaches it), keeping member
/// lists and sub-community degrees in step.
void assign_sub(HitLevel& level, VertexId v, VertexId sub);
/// Allocates an unused sub-community id.
VertexId fresh_sub(HitLevel& level);

/// Applies a delta to G^p and the degree tables of the level.
void apply_level_delta(HitLevel& level, const DeltaBatch& delta);

struct MovementResult {
  /// Vertices that changed community, first move only, with the community
  /// they held before the step.
  std::vector<std::pair<VertexId, CommunityId>> moved;
  /// Endpoints of Ψ deletions that split a component.
  std::vector<VertexId> split_endpoints;
  std::size_t pushes = 0;
  std::size_t splits = 0;
};

/// Incremental movement over an already applied delta. Seeds are endpoints of
/// cross-community insertions and intra-community deletions, classified
/// against the communities before movement. Ψ follows intra-sub-community
/// deltas; a mover loses all of its Ψ edges. `retire` lists vertices whose
/// sub-community below emptied: they are detached from their sub-community.
MovementResult inc_movement(HitLevel& level, const DeltaBatch& delta, double gamma,
                            CommunityId& next_community, std::span<const VertexId> retire = {});

/// Incremental refinement. Movers and the split-off components of Ψ get
/// fresh sub-communities; then every singleton among movers, split vertices
/// and `arrivals` tries to merge into a locally optimized neighbouring
/// sub-community of its community, in ascending (degree, id) order. Returns R,
/// the vertices with s_cur != s_pre, ascending.
std::vector<VertexId> inc_refinement(HitLevel& level, std::span<const VertexId> movers,
                                     std::span<const VertexId> split_endpoints,
                                     std::span<const VertexId> arrivals, double gamma);

/// Sums entries per unordered pair, drops near-zero sums, sorts by (u, v).
DeltaBatch compress_deltas(const DeltaBatch& delta);

/// Superedge changes for the next level: base deltas mapped through s_pre plus
/// the weight transfers of every vertex in r. Synchronizes s_pre on r.
DeltaBatch inc_aggregation(HitLevel& level, const DeltaBatch& delta, std::span<const VertexId> r);

enum class DeferredMap { kCommunities, kRoots };

/// One changed-value record: (vertex, value before the update).
using ChangeLog = std::vector<std::pair<VertexId, VertexId>>;

/// Top-down sync of f^p (from f^{p+1} through s^p) or g^p (from g^{p+1}, with
/// g^P = s^P) for the given changed sets, whose members' children are pulled
/// into the level below. Returns the entries whose value changed, per level.
std::vector<ChangeLog> def_update(HitState& state, std::vector<std::vector<VertexId>> changed,
                                  DeferredMap map);

struct LevelStats {
  std::size_t touched = 0;   // |Γ^p|
  std::size_t affected = 0;  // |Λ^p|
  std::size_t pushes = 0;
  std::size_t splits = 0;
};

struct BatchStats {
  std::vector<LevelStats> levels;
  double ms_movement = 0.0;
  double ms_refinement = 0.0;
  double ms_aggregation = 0.0;
  double ms_total = 0.0;

  std::size_t changed() const;
  std::size_t affected() const;
};

/// A community or sub-community change; kNoVertex marks an absent value.
struct ChangeRecord {
  std::size_t level = 0;  // 1-based
  VertexId vertex = 0;
  bool sub = false;
  VertexId old_value = kNoVertex;
  VertexId new_value = kNoVertex;

  friend bool operator==(const ChangeRecord&, const ChangeRecord&) = default;
};

struct StepResult {
  BatchStats stats;
  /// ΔG^p as applied at each level.
  std::vector<DeltaBatch> level_deltas;
  std::vector<ChangeRecord> changes;
};

/// One HIT-Leiden step. Validates the batch against G^1 first; a failing
/// batch leaves the state untouched. Vertices beyond the current range enter
/// as singleton communities.
StepResult hit_leiden_step(HitState& state, const DeltaBatch& batch);

/// JSON lines: {level, vertex, old_community, new_community} or
/// {level, vertex, old_sub, new_sub}; absent values are null.
std::string change_feed_jsonl(const std::vector<ChangeRecord>& changes);

}  // namespace dynleiden
