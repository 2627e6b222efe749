#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "dynleiden/graph.hpp"

namespace dynleiden {

/// Sentinel target meaning "the empty community" in gain computations.
inline constexpr CommunityId kEmptyCommunity = kNoCommunity;

/// Community mapping f over the vertices of one graph, with a reverse index
/// and per-community aggregates kept consistent under move().
class Partition {
 public:
  struct Community {
    std::vector<VertexId> members;
    Weight degree = 0.0;    // d(C)
    Weight internal = 0.0;  // stored weight of edges inside C, self-loops once
  };

  Partition() = default;
  /// membership must have one entry per vertex of g.
  Partition(const Graph& g, std::vector<CommunityId> membership);
  static Partition singletons(const Graph& g);

  std::size_t num_vertices() const { return membership_.size(); }
  std::size_t num_communities() const { return communities_.size(); }
  CommunityId community_of(VertexId v) const;
  std::span<const CommunityId> membership() const { return membership_; }

  bool has_community(CommunityId c) const { return communities_.contains(c); }
  /// Throws UnknownCommunity.
  const Community& community(CommunityId c) const;
  /// Community ids in ascending order.
  std::vector<CommunityId> community_ids() const;

  /// Moves v to target; kEmptyCommunity founds a fresh community. Returns the
  /// community v ends up in.
  CommunityId move(const Graph& g, VertexId v, CommunityId target);
  CommunityId fresh_id() const { return next_id_; }

 private:
  std::vector<CommunityId> membership_;
  std::vector<std::size_t> position_;
  std::unordered_map<CommunityId, Community> communities_;
  CommunityId next_id_ = 0;
};

/// Relabels a membership vector to dense ids 0..k-1 in order of first appearance.
std::vector<CommunityId> normalize_membership(std::span<const CommunityId> membership);

/// True if both memberships induce the same partition (labels may differ).
bool same_partition(std::span<const CommunityId> a, std::span<const CommunityId> b);

}  // namespace dynleiden
