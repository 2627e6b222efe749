#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynleiden/graph.hpp"
#include "dynleiden/partition.hpp"

namespace dynleiden {

/// One merge X ⊗ Y of a γ-order, with the quantities its condition used.
struct MergeEvent {
  std::vector<VertexId> x;
  std::vector<VertexId> y;
  std::vector<VertexId> merged;  // x followed by y
  Weight w_xy = 0.0;
  Weight d_x = 0.0;
  Weight d_y = 0.0;
};

/// Merge sequence taking singletons to the whole vertex set.
struct GammaOrder {
  std::vector<MergeEvent> events;
};

struct DensityBudget {
  std::size_t exhaustive_limit = 8;
  std::size_t restarts = 32;
  std::uint64_t seed = 0x5eed;
  bool want_witness = true;
};

struct DensityResult {
  bool dense = false;
  bool exhaustive = false;
  std::optional<GammaOrder> witness;
};

/// Searches for a γ-order over community c whose every merge satisfies
/// 2m·w(X,Y) >= γ·d(X)·d(Y) with w(X,Y) > 0, and whose every intermediate set
/// (singletons included) has ΔQ(X→∅) <= 0 relative to c. Exhaustive up to
/// budget.exhaustive_limit vertices, randomized greedy beyond that.
DensityResult verify_gamma_density(const Graph& g, const Partition& p, CommunityId c,
                                   double gamma = 1.0, const DensityBudget& budget = {});

/// Same check for an explicit vertex set.
DensityResult verify_gamma_density(const Graph& g, std::span<const VertexId> members,
                                   double gamma = 1.0, const DensityBudget& budget = {});

/// Every distinct final vertex sequence reachable by a valid γ-order over
/// members (at most 8 vertices).
std::vector<std::vector<VertexId>> enumerate_gamma_orders(const Graph& g,
                                                          std::span<const VertexId> members,
                                                          double gamma = 1.0);

/// ΔQ(X→∅) of a set X inside the community `whole`.
double set_removal_gain(const Graph& g, std::span<const VertexId> x,
                        std::span<const VertexId> whole, double gamma = 1.0);

/// Checks that a witness is a valid γ-order over members.
bool check_gamma_order(const Graph& g, std::span<const VertexId> members, const GammaOrder& order,
                       double gamma = 1.0);

struct CommunityVerdict {
  CommunityId community;
  std::size_t size;
  bool connected;
  bool gamma_dense;
  std::size_t witness_length;
};

/// Connectivity and density verdict for every community, ascending id.
std::vector<CommunityVerdict> verify_partition(const Graph& g, const Partition& p,
                                               double gamma = 1.0,
                                               const DensityBudget& budget = {});

/// JSON array of {community_id, size, connected, gamma_dense, witness_length}.
std::string verdicts_to_json(std::span<const CommunityVerdict> verdicts);

}  // namespace dynleiden
