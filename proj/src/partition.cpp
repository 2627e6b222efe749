#include "dynleiden/partition.hpp"

#include <algorithm>

#include "dynleiden/errors.hpp"

namespace dynleiden {

Partition::Partition(const Graph& g, std::vector<CommunityId> membership)
    : membership_(std::move(membership)), position_(membership_.size()) {
  if (membership_.size() != g.num_vertices()) {
    throw Error("membership size does not match the vertex count");
  }
  for (VertexId v = 0; v < membership_.size(); ++v) {
    const CommunityId c = membership_[v];
    if (c == kNoCommunity) throw UnknownCommunity(c);
    auto& com = communities_[c];
    position_[v] = com.members.size();
    com.members.push_back(v);
    com.degree += g.degree(v);
    com.internal += g.self_loop(v);
    for (const auto& n : g.neighbors(v)) {
      if (v < n.id && membership_[n.id] == c) com.internal += n.weight;
    }
    next_id_ = std::max(next_id_, c + 1);
  }
}

Partition Partition::singletons(const Graph& g) {
  std::vector<CommunityId> m(g.num_vertices());
  for (VertexId v = 0; v < m.size(); ++v) m[v] = v;
  return Partition(g, std::move(m));
}

CommunityId Partition::community_of(VertexId v) const {
  if (v >= membership_.size()) throw UnknownVertex(v);
  return membership_[v];
}

const Partition::Community& Partition::community(CommunityId c) const {
  auto it = communities_.find(c);
  if (it == communities_.end()) throw UnknownCommunity(c);
  return it->second;
}

std::vector<CommunityId> Partition::community_ids() const {
  std::vector<CommunityId> ids;
  ids.reserve(communities_.size());
  for (const auto& [c, _] : communities_) ids.push_back(c);
  std::sort(ids.begin(), ids.end());
  return ids;
}

CommunityId Partition::move(const Graph& g, VertexId v, CommunityId target) {
  const CommunityId from = community_of(v);
  if (target == from) return from;
  if (target == kEmptyCommunity) {
    target = next_id_;
  } else if (!communities_.contains(target)) {
    throw UnknownCommunity(target);
  }
  Weight to_from = 0.0;
  Weight to_target = 0.0;
  for (const auto& n : g.neighbors(v)) {
    if (membership_[n.id] == from) to_from += n.weight;
    if (membership_[n.id] == target) to_target += n.weight;
  }
  auto& src = communities_[from];
  const std::size_t pos = position_[v];
  src.members[pos] = src.members.back();
  position_[src.members[pos]] = pos;
  src.members.pop_back();
  src.degree -= g.degree(v);
  src.internal -= to_from + g.self_loop(v);
  if (src.members.empty()) communities_.erase(from);

  auto& dst = communities_[target];
  position_[v] = dst.members.size();
  dst.members.push_back(v);
  dst.degree += g.degree(v);
  dst.internal += to_target + g.self_loop(v);
  membership_[v] = target;
  next_id_ = std::max(next_id_, target + 1);
  return target;
}

std::vector<CommunityId> normalize_membership(std::span<const CommunityId> membership) {
  std::unordered_map<CommunityId, CommunityId> relabel;
  std::vector<CommunityId> out(membership.size());
  for (std::size_t i = 0; i < membership.size(); ++i) {
    auto [it, _] = relabel.try_emplace(membership[i], static_cast<CommunityId>(relabel.size()));
    out[i] = it->second;
  }
  return out;
}

bool same_partition(std::span<const CommunityId> a, std::span<const CommunityId> b) {
  return a.size() == b.size() && normalize_membership(a) == normalize_membership(b);
}

}  // namespace dynleiden
