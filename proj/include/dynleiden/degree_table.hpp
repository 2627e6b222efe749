#pragma once

#include <cstdint>
#include <vector>

#include "dynleiden/graph.hpp"

namespace dynleiden {

/// Aggregate degree per community id; ids may be sparse.
class DegreeTable {
 public:
  void add(std::uint32_t id, Weight d) {
    if (id >= degree_.size()) degree_.resize(id + std::size_t{1}, 0.0);
    degree_[id] += d;
  }
  Weight operator[](std::uint32_t id) const { return id < degree_.size() ? degree_[id] : 0.0; }
  void reset(std::uint32_t id) {
    if (id < degree_.size()) degree_[id] = 0.0;
  }

 private:
  std::vector<Weight> degree_;
};

}  // namespace dynleiden
