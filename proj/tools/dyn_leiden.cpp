#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "dynleiden/bench.hpp"
#include "dynleiden/errors.hpp"
#include "dynleiden/hit_leiden.hpp"

using namespace dynleiden;

namespace {

std::string state_json(const Maintainer& m) {
  if (const HitState* state = m.hit_state()) return hierarchy_to_json(hierarchy_view(*state)) + "\n";
  nlohmann::json out;
  out["algorithm"] = to_string(m.kind());
  out["membership"] = m.membership();
  return out.dump() + "\n";
}

int run_bench(const BenchConfig& config, const std::string& out, ReportFormat format,
              const std::string& dump_state, const std::string& change_feed) {
  std::ofstream feed;
  if (!change_feed.empty()) {
    feed.open(change_feed, std::ios::binary);
    if (!feed) throw IoError("cannot open " + change_feed + " for writing");
  }
  std::string final_state;
  const auto reports = run_benchmark(config, [&](std::size_t batch, const Maintainer& m) {
    if (feed.is_open()) feed << change_feed_jsonl(m.last_changes());
    if (!dump_state.empty() && batch == config.batches) final_state = state_json(m);
  });
  if (feed.is_open()) {
    feed.close();
    if (!feed) throw IoError("cannot write " + change_feed);
  }
  if (!dump_state.empty()) write_text(dump_state, final_state);
  write_text(out, emit_report(reports, format));
  return 0;
}

int run_gen(const PlantedPartition& spec, const std::string& out) {
  std::ostringstream text;
  write_edge_list(text, planted_partition(spec));
  write_text(out, text.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leiden community maintenance under batched edge updates"};
  app.require_subcommand(1);

  BenchConfig config;
  std::string algorithm = "hit";
  std::string out = "-";
  std::string format = "csv";
  std::string dump_state;
  std::string change_feed;
  bool no_timing = false;

  auto* bench = app.add_subcommand("bench", "Replay an edge stream in batches and report per-batch metrics");
  bench->add_option("--input", config.input, "Edge list: u v [w [t]] per line")->required()->check(CLI::ExistingFile);
  bench->add_option("--algorithm", algorithm, "static, nd or hit")
      ->check(CLI::IsMember({"static", "nd", "hit"}))
      ->capture_default_str();
  bench->add_option("--batch-size", config.batch_size, "Edges inserted per batch")->required();
  bench->add_option("--batches", config.batches, "Number of batches")->capture_default_str();
  bench->add_option("--gamma", config.gamma, "Resolution")->capture_default_str();
  bench->add_option("--levels", config.levels, "Hierarchy levels")->capture_default_str();
  bench->add_option("--initial-fraction", config.initial_fraction, "Share of edges in the base graph")
      ->capture_default_str();
  bench->add_option("--seed", config.seed, "Shuffle and sampling seed")->capture_default_str();
  bench->add_flag("--with-deletions", config.with_deletions, "Also delete the oldest edges in every batch");
  bench->add_option("--density-sample", config.density_sample,
                    "Communities checked for gamma-density per batch (0 skips)")
      ->capture_default_str();
  bench->add_flag("--no-timing", no_timing, "Write zeros in the timing columns");
  bench->add_option("--out", out, "Report path, - for stdout")->capture_default_str();
  bench->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  bench->add_option("--dump-state", dump_state, "Write the final state as JSON");
  bench->add_option("--change-feed", change_feed, "Write community changes as JSON lines (hit only)");

  PlantedPartition spec;
  std::string gen_out = "-";
  auto* gen = app.add_subcommand("gen", "Write a planted-partition edge list");
  gen->add_option("--blocks", spec.blocks, "Number of blocks")->capture_default_str();
  gen->add_option("--size", spec.block_size, "Vertices per block")->capture_default_str();
  gen->add_option("--p-in", spec.p_in, "Intra-block edge probability")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  gen->add_option("--p-out", spec.p_out, "Inter-block edge probability")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  gen->add_option("--seed", spec.seed, "Generator seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output path, - for stdout")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return run_gen(spec, gen_out);
    config.algorithm = parse_maintainer(algorithm);
    config.timing = !no_timing;
    config.validate();
    if (!change_feed.empty() && config.algorithm != MaintainerKind::kHit) {
      throw std::invalid_argument("--change-feed needs --algorithm hit");
    }
    return run_bench(config, out, format == "json" ? ReportFormat::kJson : ReportFormat::kCsv, dump_state,
                     change_feed);
  } catch (const std::invalid_argument& e) {
    std::cerr << "dyn-leiden: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "dyn-leiden: " << e.what() << '\n';
    return 1;
  }
}
