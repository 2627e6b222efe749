#pragma once

#include <span>
#include <vector>

#include "dynleiden/graph.hpp"
#include "dynleiden/partition.hpp"

namespace dynleiden {

/// Absolute tolerance on modularity gains.
inline constexpr double kGainTolerance = 1e-12;

/// Gain of moving an aggregate with degree d_v out of a community of degree
/// d_from (which includes it) into one of degree d_to. w_to and w_from are
/// its edge weights to the target and to the rest of its current community.
inline double gain_formula(Weight w_to, Weight w_from, Weight d_v, Weight d_from, Weight d_to,
                           Weight m, double gamma) {
  const double two_m = 2.0 * m;
  return (w_to - w_from) / two_m + gamma * d_v * (d_from - d_v - d_to) / (two_m * two_m);
}

/// Throws EmptyGraph when m == 0.
double modularity(const Graph& g, const Partition& p, double gamma = 1.0);
double modularity(const Graph& g, std::span<const CommunityId> membership, double gamma = 1.0);

/// Gain of moving v into target (kEmptyCommunity for a fresh community).
/// Equals half of the exact change in modularity.
double modularity_gain(const Graph& g, const Partition& p, VertexId v, CommunityId target,
                       double gamma = 1.0);

struct ConnectivityReport {
  CommunityId community;
  std::size_t size;
  bool connected;
};

/// One entry per community, ascending id.
std::vector<ConnectivityReport> check_connectivity(const Graph& g, const Partition& p);

/// True if the subgraph induced on members is connected (empty and singleton sets are).
bool induced_connected(const Graph& g, std::span<const VertexId> members);

/// Fraction of vertices with no positive-gain move to a neighbouring or empty community.
double vertex_optimality_fraction(const Graph& g, const Partition& p, double gamma = 1.0);

enum class LemmaCase {
  kIntraDeletion1,
  kIntraDeletion2,
  kIntraDeletion3,
  kIntraDeletion4,
  kCrossDeletion1,
  kCrossDeletion2,
  kCrossDeletion3,
  kCrossDeletion4,
  kInsertion1,
  kInsertion2,
  kInsertion3,
  kInsertion4,
};

struct LemmaParams {
  Weight alpha = 0.0;
  Weight m = 0.0;
  Weight d_v = 0.0;
  Weight d_u = 0.0;  // d(U), U the intermediate before v joined
  Weight w_vu = 0.0;
  Weight d_i = 0.0;  // d(I) = d(U) + d(v)
  double gamma = 1.0;
};

/// Whether an update of size alpha can remove the vertex from its sub-community
/// under the given case. Throws std::invalid_argument on negative parameters
/// or m <= 0 and DivisionByZero when d(U) or d(v) is a zero divisor.
bool lemma_threshold(LemmaCase kind, const LemmaParams& params);

}  // namespace dynleiden
