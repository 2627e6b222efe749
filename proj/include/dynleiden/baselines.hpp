#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "dynleiden/graph.hpp"
#include "dynleiden/hit_leiden.hpp"
#include "dynleiden/leiden.hpp"

namespace dynleiden {

enum class MaintainerKind { kStatic, kNaiveDynamic, kHit };

/// "static", "nd" or "hit".
std::string to_string(MaintainerKind kind);
/// Inverse of to_string; throws std::invalid_argument on other names.
MaintainerKind parse_maintainer(const std::string& name);

/// Applies the batch to g, then runs static Leiden from singletons.
std::vector<VertexId> st_leiden_step(Graph& g, const DeltaBatch& batch, std::size_t levels,
                                     double gamma = 1.0, PhaseTimes* times = nullptr);

/// Applies the batch to g, then runs static Leiden starting from prev
/// (vertices beyond prev start as singletons).
std::vector<VertexId> nd_leiden_step(const std::vector<VertexId>& prev, Graph& g,
                                     const DeltaBatch& batch, std::size_t levels,
                                     double gamma = 1.0, PhaseTimes* times = nullptr);

struct StepReport {
  PhaseTimes times;
  double ms_total = 0.0;
  /// Distinct input endpoints (baselines) or Σ|Γ^p| (HIT).
  std::size_t changed = 0;
  /// Vertices processed over all levels (baselines) or Σ|Λ^p| (HIT).
  std::size_t affected = 0;
};

/// One community-maintenance algorithm behind a common stepping interface.
class Maintainer {
 public:
  Maintainer(MaintainerKind kind, const Graph& base, std::size_t levels, double gamma = 1.0);

  MaintainerKind kind() const { return kind_; }
  StepReport step(const DeltaBatch& batch);
  const Graph& graph() const;
  const std::vector<VertexId>& membership() const;
  /// HIT state; null for the baselines.
  const HitState* hit_state() const { return kind_ == MaintainerKind::kHit ? &hit_ : nullptr; }
  /// Change records of the last HIT step.
  const std::vector<ChangeRecord>& last_changes() const { return changes_; }

 private:
  MaintainerKind kind_;
  std::size_t levels_;
  double gamma_;
  Graph graph_;
  std::vector<VertexId> membership_;
  HitState hit_;
  std::vector<ChangeRecord> changes_;
};

}  // namespace dynleiden
