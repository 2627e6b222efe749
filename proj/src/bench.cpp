#include "dynleiden/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "dynleiden/errors.hpp"
#include "dynleiden/gamma_density.hpp"
#include "dynleiden/metrics.hpp"

namespace dynleiden {

namespace {

/// Calls emit(k) for every index k < count kept with probability p.
template <class Emit>
void skip_sample(std::uint64_t count, double p, std::mt19937_64& rng, Emit&& emit) {
  if (p <= 0.0 || count == 0) return;
  if (p >= 1.0) {
    for (std::uint64_t k = 0; k < count; ++k) emit(k);
    return;
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double log_q = std::log1p(-p);
  std::uint64_t k = 0;
  while (true) {
    const double u = 1.0 - unit(rng);  // (0, 1]
    const double skip = std::floor(std::log(u) / log_q);
    if (skip >= static_cast<double>(count - k)) return;
    k += static_cast<std::uint64_t>(skip);
    emit(k);
    if (++k >= count) return;
  }
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

}  // namespace

std::vector<WeightedEdge> planted_partition(const PlantedPartition& spec) {
  if (spec.p_in < 0.0 || spec.p_in > 1.0 || spec.p_out < 0.0 || spec.p_out > 1.0) {
    throw std::invalid_argument("probabilities must lie in [0, 1]");
  }
  std::mt19937_64 rng(spec.seed);
  const std::uint64_t n = spec.block_size;
  std::vector<WeightedEdge> edges;
  for (std::size_t a = 0; a < spec.blocks; ++a) {
    const auto base_a = static_cast<VertexId>(a * n);
    // Row i of the upper triangle holds pairs (i, i+1..n-1).
    std::uint64_t row = 0;
    std::uint64_t row_start = 0;
    skip_sample(n * (n - 1) / 2, spec.p_in, rng, [&](std::uint64_t k) {
      while (k >= row_start + (n - 1 - row)) {
        row_start += n - 1 - row;
        ++row;
      }
      const auto j = static_cast<VertexId>(row + 1 + (k - row_start));
      edges.push_back({base_a + static_cast<VertexId>(row), base_a + j, 1.0});
    });
    for (std::size_t b = a + 1; b < spec.blocks; ++b) {
      const auto base_b = static_cast<VertexId>(b * n);
      skip_sample(n * n, spec.p_out, rng, [&](std::uint64_t k) {
        edges.push_back({base_a + static_cast<VertexId>(k / n), base_b + static_cast<VertexId>(k % n), 1.0});
      });
    }
  }
  return edges;
}

void write_edge_list(std::ostream& out, const std::vector<WeightedEdge>& edges) {
  for (const auto& e : edges) out << e.u << ' ' << e.v << ' ' << e.weight << '\n';
}

void BenchConfig::validate() const {
  if (!(initial_fraction > 0.0 && initial_fraction < 1.0)) {
    throw std::invalid_argument("initial fraction must lie strictly between 0 and 1");
  }
  if (batch_size < 1) throw std::invalid_argument("batch size must be at least 1");
  if (batches < 1) throw std::invalid_argument("batch count must be at least 1");
  if (levels < 1) throw std::invalid_argument("level count must be at least 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
}

BatchPlan make_batches(std::vector<StreamEdge> edges, const BenchConfig& config) {
  config.validate();
  if (edges.empty()) throw NotEnoughEdges("the edge stream is empty");
  const bool timed = std::all_of(edges.begin(), edges.end(), [](const StreamEdge& e) { return e.timestamp.has_value(); });
  if (timed) {
    std::stable_sort(edges.begin(), edges.end(),
                     [](const StreamEdge& a, const StreamEdge& b) { return *a.timestamp < *b.timestamp; });
  } else {
    std::mt19937_64 rng(config.seed);
    std::shuffle(edges.begin(), edges.end(), rng);
  }
  const auto base = static_cast<std::size_t>(std::floor(config.initial_fraction * static_cast<double>(edges.size())));
  const std::size_t needed = base + config.batch_size * config.batches;
  if (needed > edges.size()) {
    throw NotEnoughEdges("need " + std::to_string(needed) + " edges for the base graph and " +
                         std::to_string(config.batches) + " batches, stream has " +
                         std::to_string(edges.size()));
  }
  if (config.with_deletions && config.batch_size * config.batches > base) {
    throw NotEnoughEdges("the base graph has fewer than " +
                         std::to_string(config.batch_size * config.batches) + " edges to delete");
  }
  BatchPlan plan;
  std::vector<WeightedEdge> initial;
  std::size_t n = 0;
  for (std::size_t i = 0; i < base; ++i) {
    initial.push_back({edges[i].u, edges[i].v, edges[i].weight});
    n = std::max<std::size_t>(n, std::max(edges[i].u, edges[i].v) + std::size_t{1});
  }
  plan.initial = graph_from_edges(n, initial);
  for (std::size_t r = 0; r < config.batches; ++r) {
    DeltaBatch batch;
    if (config.with_deletions) {
      for (std::size_t i = r * config.batch_size; i < (r + 1) * config.batch_size; ++i) {
        batch.push_back({edges[i].u, edges[i].v, -edges[i].weight});
      }
    }
    const std::size_t start = base + r * config.batch_size;
    for (std::size_t i = start; i < start + config.batch_size; ++i) {
      batch.push_back({edges[i].u, edges[i].v, edges[i].weight});
    }
    plan.batches.push_back(std::move(batch));
  }
  return plan;
}

QualityReport assess(const Graph& g, const std::vector<VertexId>& membership, double gamma,
                     std::size_t density_sample, std::uint64_t seed) {
  QualityReport q;
  std::map<VertexId, std::vector<VertexId>> groups;
  for (VertexId v = 0; v < membership.size(); ++v) groups[membership[v]].push_back(v);
  q.communities = groups.size();
  if (g.total_weight() > 0.0) {
    std::vector<CommunityId> f(membership.begin(), membership.end());
    q.modularity = modularity(g, f, gamma);
  }
  if (groups.empty()) return q;
  std::vector<const std::vector<VertexId>*> all;
  std::size_t connected = 0;
  for (const auto& [_, members] : groups) {
    all.push_back(&members);
    connected += induced_connected(g, members);
  }
  q.pct_connected = 100.0 * static_cast<double>(connected) / static_cast<double>(all.size());
  if (density_sample == 0 || g.total_weight() <= 0.0) return q;
  if (all.size() > density_sample) {
    std::mt19937_64 rng(seed);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(density_sample);
  }
  DensityBudget budget;
  budget.seed = seed;
  budget.want_witness = false;
  std::size_t dense = 0;
  for (const auto* members : all) dense += verify_gamma_density(g, *members, gamma, budget).dense;
  q.pct_gamma_dense = 100.0 * static_cast<double>(dense) / static_cast<double>(all.size());
  return q;
}

std::vector<BatchReport> run_benchmark(const BatchPlan& plan, const BenchConfig& config,
                                       const BatchObserver& observer) {
  config.validate();
  Maintainer maintainer(config.algorithm, plan.initial, config.levels, config.gamma);
  std::vector<BatchReport> reports;
  for (std::size_t r = 0; r < plan.batches.size(); ++r) {
    const StepReport step = maintainer.step(plan.batches[r]);
    BatchReport report;
    report.batch = r + 1;
    report.algorithm = to_string(config.algorithm);
    const QualityReport q = assess(maintainer.graph(), maintainer.membership(), config.gamma,
                                   config.density_sample, config.seed + r);
    report.modularity = q.modularity;
    report.communities = q.communities;
    report.pct_connected = q.pct_connected;
    report.pct_gamma_dense = q.pct_gamma_dense;
    if (config.timing) {
      report.ms_movement = step.times.movement_ms;
      report.ms_refinement = step.times.refinement_ms;
      report.ms_aggregation = step.times.aggregation_ms;
      report.ms_total = step.ms_total;
    }
    report.changed = step.changed;
    report.aff = step.affected;
    report.warmup = r < 2;
    reports.push_back(std::move(report));
    if (observer) observer(r + 1, maintainer);
  }
  return reports;
}

std::vector<BatchReport> run_benchmark(const BenchConfig& config, const BatchObserver& observer) {
  config.validate();
  auto stream = load_edge_stream_file(config.input);
  return run_benchmark(make_batches(std::move(stream.edges), config), config, observer);
}

std::string emit_report(const std::vector<BatchReport>& reports, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : reports) {
      out.push_back({{"batch", r.batch},
                     {"algorithm", r.algorithm},
                     {"modularity", r.modularity},
                     {"communities", r.communities},
                     {"pct_connected", r.pct_connected},
                     {"pct_gamma_dense", r.pct_gamma_dense},
                     {"ms_movement", r.ms_movement},
                     {"ms_refinement", r.ms_refinement},
                     {"ms_aggregation", r.ms_aggregation},
                     {"ms_total", r.ms_total},
                     {"changed", r.changed},
                     {"aff", r.aff},
                     {"warmup", r.warmup}});
    }
    return out.dump(2) + "\n";
  }
  std::string out =
      "batch,algorithm,modularity,communities,pct_connected,pct_gamma_dense,"
      "ms_movement,ms_refinement,ms_aggregation,ms_total,changed,aff\n";
  for (const auto& r : reports) {
    out += std::to_string(r.batch) + ',' + r.algorithm + ',' + fixed(r.modularity, 10) + ',' +
           std::to_string(r.communities) + ',' + fixed(r.pct_connected, 4) + ',' +
           fixed(r.pct_gamma_dense, 4) + ',' + fixed(r.ms_movement, 3) + ',' +
           fixed(r.ms_refinement, 3) + ',' + fixed(r.ms_aggregation, 3) + ',' +
           fixed(r.ms_total, 3) + ',' + std::to_string(r.changed) + ',' + std::to_string(r.aff) + '\n';
  }
  return out;
}

std::vector<BatchReport> parse_report_json(const std::string& text) {
  std::vector<BatchReport> out;
  try {
    for (const auto& j : nlohmann::json::parse(text)) {
      BatchReport r;
      r.batch = j.at("batch").get<std::size_t>();
      r.algorithm = j.at("algorithm").get<std::string>();
      r.modularity = j.at("modularity").get<double>();
      r.communities = j.at("communities").get<std::size_t>();
      r.pct_connected = j.at("pct_connected").get<double>();
      r.pct_gamma_dense = j.at("pct_gamma_dense").get<double>();
      r.ms_movement = j.at("ms_movement").get<double>();
      r.ms_refinement = j.at("ms_refinement").get<double>();
      r.ms_aggregation = j.at("ms_aggregation").get<double>();
      r.ms_total = j.at("ms_total").get<double>();
      r.changed = j.at("changed").get<std::size_t>();
      r.aff = j.at("aff").get<std::size_t>();
      r.warmup = j.value("warmup", false);
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad report: ") + e.what());
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.close();
  if (!out) throw IoError("cannot write " + path);
}

}  // namespace dynleiden
