#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "dynleiden/baselines.hpp"
#include "dynleiden/edge_stream.hpp"
#include "dynleiden/graph.hpp"

namespace dynleiden {

/// k blocks of n vertices; each intra-block pair is an edge with probability
/// p_in, each inter-block pair with probability p_out. Vertex b*n + i is the
/// i-th vertex of block b. Unit weights.
struct PlantedPartition {
  std::size_t blocks = 20;
  std::size_t block_size = 100;
  double p_in = 0.09;
  double p_out = 0.0005;
  std::uint64_t seed = 1;
};

/// Edges in block-pair order, sampled by geometric skips.
std::vector<WeightedEdge> planted_partition(const PlantedPartition& spec);

/// Writes "u v w" lines.
void write_edge_list(std::ostream& out, const std::vector<WeightedEdge>& edges);

struct BenchConfig {
  std::string input;
  double initial_fraction = 0.8;
  std::size_t batch_size = 100;
  std::size_t batches = 9;
  double gamma = 1.0;
  std::size_t levels = 10;
  MaintainerKind algorithm = MaintainerKind::kHit;
  std::uint64_t seed = 0;
  /// Also delete the oldest batch_size edges of the window in every batch.
  bool with_deletions = false;
  /// Communities checked for γ-density per batch; 0 skips the check.
  std::size_t density_sample = 500;
  /// False writes zero into every timing column.
  bool timing = true;

  /// Throws std::invalid_argument for out-of-range fields.
  void validate() const;
};

struct BatchPlan {
  Graph initial;
  std::vector<DeltaBatch> batches;
};

/// Orders the stream (by timestamp when every edge has one, otherwise by a
/// seeded shuffle), takes the first initial_fraction as the base graph and
/// turns each following window of batch_size edges into one batch. Throws
/// NotEnoughEdges when the stream cannot fill every batch.
BatchPlan make_batches(std::vector<StreamEdge> edges, const BenchConfig& config);

struct BatchReport {
  std::size_t batch = 0;  // 1-based
  std::string algorithm;
  double modularity = 0.0;
  std::size_t communities = 0;
  double pct_connected = 0.0;
  double pct_gamma_dense = 0.0;
  double ms_movement = 0.0;
  double ms_refinement = 0.0;
  double ms_aggregation = 0.0;
  double ms_total = 0.0;
  std::size_t changed = 0;
  std::size_t aff = 0;
  /// The first two batches are warm-up for efficiency comparisons.
  bool warmup = false;

  friend bool operator==(const BatchReport&, const BatchReport&) = default;
};

/// Quality of a membership: modularity, community count, and the share of
/// connected and (over a seeded sample) γ-dense communities.
struct QualityReport {
  double modularity = 0.0;
  std::size_t communities = 0;
  double pct_connected = 100.0;
  double pct_gamma_dense = 100.0;
};
QualityReport assess(const Graph& g, const std::vector<VertexId>& membership, double gamma,
                     std::size_t density_sample, std::uint64_t seed);

/// Called after every batch with the 1-based batch index.
using BatchObserver = std::function<void(std::size_t, const Maintainer&)>;

/// Replays the plan with the configured algorithm and reports every batch.
std::vector<BatchReport> run_benchmark(const BatchPlan& plan, const BenchConfig& config,
                                       const BatchObserver& observer = {});
/// Loads config.input and runs the benchmark on it.
std::vector<BatchReport> run_benchmark(const BenchConfig& config, const BatchObserver& observer = {});

enum class ReportFormat { kCsv, kJson };

/// CSV columns: batch, algorithm, modularity, communities, pct_connected,
/// pct_gamma_dense, ms_movement, ms_refinement, ms_aggregation, ms_total,
/// changed, aff. JSON is an array of objects with the same keys plus warmup.
std::string emit_report(const std::vector<BatchReport>& reports, ReportFormat format);
/// Parses the JSON form of emit_report.
std::vector<BatchReport> parse_report_json(const std::string& text);

/// Writes text to path, or to stdout when path is "-". Throws IoError.
void write_text(const std::string& path, const std::string& text);

}  // namespace dynleiden
