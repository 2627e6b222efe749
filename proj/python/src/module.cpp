#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dynleiden/baselines.hpp"
#include "dynleiden/bench.hpp"
#include "dynleiden/errors.hpp"
#include "dynleiden/gamma_density.hpp"
#include "dynleiden/hit_leiden.hpp"
#include "dynleiden/leiden.hpp"
#include "dynleiden/metrics.hpp"

namespace py = pybind11;
using namespace dynleiden;

namespace {

using EdgeTuple = std::tuple<VertexId, VertexId, Weight>;

std::vector<WeightedEdge> to_edges(const std::vector<EdgeTuple>& edges) {
  std::vector<WeightedEdge> out;
  out.reserve(edges.size());
  for (const auto& [u, v, w] : edges) out.push_back({u, v, w});
  return out;
}

DeltaBatch to_batch(const std::vector<EdgeTuple>& batch) {
  DeltaBatch out;
  out.reserve(batch.size());
  for (const auto& [u, v, a] : batch) out.push_back({u, v, a});
  return out;
}

std::vector<EdgeTuple> from_edges(const std::vector<WeightedEdge>& edges) {
  std::vector<EdgeTuple> out;
  out.reserve(edges.size());
  for (const auto& e : edges) out.emplace_back(e.u, e.v, e.weight);
  return out;
}

py::dict report_dict(const BatchReport& r) {
  py::dict d;
  d["batch"] = r.batch;
  d["algorithm"] = r.algorithm;
  d["modularity"] = r.modularity;
  d["communities"] = r.communities;
  d["pct_connected"] = r.pct_connected;
  d["pct_gamma_dense"] = r.pct_gamma_dense;
  d["ms_movement"] = r.ms_movement;
  d["ms_refinement"] = r.ms_refinement;
  d["ms_aggregation"] = r.ms_aggregation;
  d["ms_total"] = r.ms_total;
  d["changed"] = r.changed;
  d["aff"] = r.aff;
  d["warmup"] = r.warmup;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Leiden community maintenance under batched edge updates";

  auto base = py::register_exception<Error>(m, "DynLeidenError", PyExc_RuntimeError);
  py::register_exception<DeletionExceedsWeight>(m, "DeletionExceedsWeight", base.ptr());
  py::register_exception<UnknownVertex>(m, "UnknownVertex", base.ptr());
  py::register_exception<EmptyGraph>(m, "EmptyGraph", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<NotEnoughEdges>(m, "NotEnoughEdges", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<Graph>(m, "Graph")
      .def(py::init<std::size_t>(), py::arg("num_vertices") = 0)
      .def_static(
          "from_edges",
          [](std::size_t n, const std::vector<EdgeTuple>& edges) { return graph_from_edges(n, to_edges(edges)); },
          py::arg("num_vertices"), py::arg("edges"))
      .def_property_readonly("num_vertices", &Graph::num_vertices)
      .def_property_readonly("num_edges", &Graph::num_edges)
      .def_property_readonly("total_weight", &Graph::total_weight)
      .def("degree", &Graph::degree, py::arg("v"))
      .def("weight", &Graph::weight, py::arg("u"), py::arg("v"))
      .def("update_edge", &Graph::update_edge, py::arg("u"), py::arg("v"), py::arg("alpha"))
      .def(
          "apply", [](Graph& g, const std::vector<EdgeTuple>& batch) { g.apply(to_batch(batch)); },
          py::arg("batch"))
      .def("edges", [](const Graph& g) { return from_edges(g.edges()); })
      .def("__repr__", [](const Graph& g) {
        return "<Graph vertices=" + std::to_string(g.num_vertices()) + " edges=" + std::to_string(g.num_edges()) + ">";
      });

  m.def(
      "modularity",
      [](const Graph& g, const std::vector<CommunityId>& membership, double gamma) {
        return modularity(g, std::span<const CommunityId>(membership), gamma);
      },
      py::arg("graph"), py::arg("membership"), py::arg("gamma") = 1.0);
  m.def(
      "modularity_gain",
      [](const Graph& g, const std::vector<CommunityId>& membership, VertexId v, std::optional<CommunityId> target,
         double gamma) {
        return modularity_gain(g, Partition(g, membership), v, target.value_or(kEmptyCommunity), gamma);
      },
      py::arg("graph"), py::arg("membership"), py::arg("v"), py::arg("target"), py::arg("gamma") = 1.0,
      "Gain of moving v into target; None means a fresh community.");
  m.def(
      "is_connected",
      [](const Graph& g, const std::vector<VertexId>& members) { return induced_connected(g, members); },
      py::arg("graph"), py::arg("members"));
  m.def(
      "is_gamma_dense",
      [](const Graph& g, const std::vector<VertexId>& members, double gamma) {
        DensityBudget budget;
        budget.want_witness = false;
        return verify_gamma_density(g, members, gamma, budget).dense;
      },
      py::arg("graph"), py::arg("members"), py::arg("gamma") = 1.0);
  m.def(
      "leiden",
      [](const Graph& g, std::size_t levels, double gamma) {
        LeidenOptions options;
        options.levels = levels;
        options.gamma = gamma;
        return run_leiden(g, options).membership();
      },
      py::arg("graph"), py::arg("levels") = 10, py::arg("gamma") = 1.0);

  py::class_<Maintainer>(m, "Maintainer")
      .def(py::init([](const std::string& algorithm, const Graph& g, std::size_t levels, double gamma) {
             return Maintainer(parse_maintainer(algorithm), g, levels, gamma);
           }),
           py::arg("algorithm"), py::arg("graph"), py::arg("levels") = 10, py::arg("gamma") = 1.0)
      .def(
          "step",
          [](Maintainer& self, const std::vector<EdgeTuple>& batch) {
            const StepReport r = self.step(to_batch(batch));
            py::dict d;
            d["ms_movement"] = r.times.movement_ms;
            d["ms_refinement"] = r.times.refinement_ms;
            d["ms_aggregation"] = r.times.aggregation_ms;
            d["ms_total"] = r.ms_total;
            d["changed"] = r.changed;
            d["aff"] = r.affected;
            return d;
          },
          py::arg("batch"))
      .def_property_readonly("algorithm", [](const Maintainer& self) { return to_string(self.kind()); })
      .def_property_readonly("membership", &Maintainer::membership)
      .def_property_readonly("graph", &Maintainer::graph)
      .def("change_feed", [](const Maintainer& self) { return change_feed_jsonl(self.last_changes()); })
      .def("state_json", [](const Maintainer& self) -> std::optional<std::string> {
        if (const HitState* st = self.hit_state()) return hierarchy_to_json(hierarchy_view(*st));
        return std::nullopt;
      });

  m.def(
      "planted_partition",
      [](std::size_t blocks, std::size_t size, double p_in, double p_out, std::uint64_t seed) {
        return from_edges(planted_partition({blocks, size, p_in, p_out, seed}));
      },
      py::arg("blocks"), py::arg("size"), py::arg("p_in"), py::arg("p_out"), py::arg("seed") = 1);

  m.def(
      "run_benchmark",
      [](const std::string& input, const std::string& algorithm, std::size_t batch_size, std::size_t batches,
         double gamma, std::size_t levels, double initial_fraction, std::uint64_t seed, bool with_deletions,
         std::size_t density_sample, bool timing) {
        BenchConfig config;
        config.input = input;
        config.algorithm = parse_maintainer(algorithm);
        config.batch_size = batch_size;
        config.batches = batches;
        config.gamma = gamma;
        config.levels = levels;
        config.initial_fraction = initial_fraction;
        config.seed = seed;
        config.with_deletions = with_deletions;
        config.density_sample = density_sample;
        config.timing = timing;
        std::vector<BatchReport> reports;
        {
          py::gil_scoped_release release;
          reports = run_benchmark(config);
        }
        py::list out;
        for (const auto& r : reports) out.append(report_dict(r));
        return out;
      },
      py::arg("input"), py::arg("algorithm") = "hit", py::arg("batch_size") = 100, py::arg("batches") = 9,
      py::arg("gamma") = 1.0, py::arg("levels") = 10, py::arg("initial_fraction") = 0.8, py::arg("seed") = 0,
      py::arg("with_deletions") = false, py::arg("density_sample") = 500, py::arg("timing") = true,
      "Replays an edge-list file in batches; one dict per batch.");
}
