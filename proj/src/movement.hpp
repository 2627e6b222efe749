#pragma once

// Building blocks shared by static Leiden and HIT-Leiden.

#include <algorithm>
#include <chrono>
#include <deque>
#include <span>
#include <vector>

#include "dynleiden/degree_table.hpp"
#include "dynleiden/graph.hpp"
#include "dynleiden/metrics.hpp"

namespace dynleiden::detail {

using dynleiden::DegreeTable;

/// Sparse accumulator keyed by id; clear() costs O(keys touched).
class Accumulator {
 public:
  void add(std::uint32_t id, Weight w) {
    if (id >= sum_.size()) {
      sum_.resize(id + std::size_t{1}, 0.0);
      seen_.resize(id + std::size_t{1}, 0);
    }
    if (!seen_[id]) {
      seen_[id] = 1;
      keys_.push_back(id);
    }
    sum_[id] += w;
  }
  Weight operator[](std::uint32_t id) const { return id < sum_.size() ? sum_[id] : 0.0; }
  bool contains(std::uint32_t id) const { return id < seen_.size() && seen_[id]; }
  std::span<const std::uint32_t> keys() const { return keys_; }
  void clear() {
    for (const auto k : keys_) {
      sum_[k] = 0.0;
      seen_[k] = 0;
    }
    keys_.clear();
  }

 private:
  std::vector<Weight> sum_;
  std::vector<char> seen_;
  std::vector<std::uint32_t> keys_;
};

/// Set of ids with O(1) insert/test and O(size) clear.
class Marker {
 public:
  bool insert(std::uint32_t id) {
    if (id >= mark_.size()) mark_.resize(id + std::size_t{1}, 0);
    if (mark_[id]) return false;
    mark_[id] = 1;
    items_.push_back(id);
    return true;
  }
  bool contains(std::uint32_t id) const { return id < mark_.size() && mark_[id]; }
  const std::vector<std::uint32_t>& items() const { return items_; }
  void clear() {
    for (const auto id : items_) mark_[id] = 0;
    items_.clear();
  }

 private:
  std::vector<char> mark_;
  std::vector<std::uint32_t> items_;
};

/// FIFO work queue without duplicates.
class WorkQueue {
 public:
  void push(VertexId v) {
    if (v >= queued_.size()) queued_.resize(v + std::size_t{1}, 0);
    if (queued_[v]) return;
    queued_[v] = 1;
    ++pushes_;
    queue_.push_back(v);
  }
  bool empty() const { return queue_.empty(); }
  std::size_t pushes() const { return pushes_; }
  VertexId pop() {
    const VertexId v = queue_.front();
    queue_.pop_front();
    queued_[v] = 0;
    return v;
  }

 private:
  std::deque<VertexId> queue_;
  std::vector<char> queued_;
  std::size_t pushes_ = 0;
};

/// Milliseconds since construction or the previous lap.
class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

struct MoveChoice {
  bool move = false;
  bool to_empty = false;
  CommunityId target = kNoCommunity;
  double gain = 0.0;
};

/// Argmax of the gain over neighbouring communities and the empty community.
/// Ties go to the smallest community id; the empty community loses every tie.
/// choice.move is false unless the best gain is positive.
inline MoveChoice best_move(const Graph& g, std::span<const CommunityId> f,
                            const DegreeTable& degrees, VertexId v, double gamma,
                            Accumulator& scratch) {
  const Weight m = g.total_weight();
  MoveChoice choice;
  if (m <= 0.0) return choice;
  const CommunityId from = f[v];
  scratch.clear();
  for (const auto& n : g.neighbors(v)) scratch.add(f[n.id], n.weight);
  const Weight w_from = scratch[from];
  const Weight d_v = g.degree(v);
  const Weight d_from = degrees[from];
  double best = gain_formula(0.0, w_from, d_v, d_from, 0.0, m, gamma);
  bool to_empty = true;
  CommunityId target = kNoCommunity;
  for (const auto c : scratch.keys()) {
    if (c == from) continue;
    const double gain = gain_formula(scratch[c], w_from, d_v, d_from, degrees[c], m, gamma);
    if (gain > best || (gain == best && (to_empty || c < target))) {
      best = gain;
      target = c;
      to_empty = false;
    }
  }
  if (best > kGainTolerance) {
    choice.move = true;
    choice.to_empty = to_empty;
    choice.target = target;
    choice.gain = best;
  }
  return choice;
}

/// Runs the movement loop until the queue drains. on_move(v, from, to) is
/// called after f and the degree table reflect the move.
template <class OnMove>
void run_movement(const Graph& g, std::vector<CommunityId>& f, DegreeTable& degrees,
                  CommunityId& next_community, double gamma, WorkQueue& queue,
                  Accumulator& scratch, OnMove&& on_move) {
  while (!queue.empty()) {
    const VertexId v = queue.pop();
    const MoveChoice choice = best_move(g, f, degrees, v, gamma, scratch);
    if (!choice.move) continue;
    const CommunityId from = f[v];
    const CommunityId to = choice.to_empty ? next_community++ : choice.target;
    degrees.add(from, -g.degree(v));
    degrees.add(to, g.degree(v));
    f[v] = to;
    on_move(v, from, to);
    for (const auto& n : g.neighbors(v)) {
      if (f[n.id] != to) queue.push(n.id);
    }
  }
}

/// Vertices sorted by ascending (degree, id).
inline void sort_by_degree(const Graph& g, std::vector<VertexId>& vertices) {
  std::sort(vertices.begin(), vertices.end(), [&](VertexId a, VertexId b) {
    const Weight da = g.degree(a);
    const Weight db = g.degree(b);
    return da != db ? da < db : a < b;
  });
}

/// ΔQ(S→∅) <= tolerance for a set with degree d_s and weight ext to the rest
/// of a community of degree d_c.
inline bool locally_optimized(Weight ext, Weight d_s, Weight d_c, Weight m, double gamma) {
  const double two_m = 2.0 * m;
  return -ext / two_m + gamma * d_s * (d_c - d_s) / (two_m * two_m) <= kGainTolerance;
}

/// ΔM(v→S): gain of merging singleton v into sub-community S.
inline double merge_gain(Weight w_vs, Weight d_v, Weight d_s, Weight m, double gamma) {
  const double two_m = 2.0 * m;
  return w_vs / two_m - gamma * d_v * d_s / (two_m * two_m);
}

}  // namespace dynleiden::detail
