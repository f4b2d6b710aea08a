#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "aptrisk/dynamics.hpp"
#include "aptrisk/error.hpp"
#include "aptrisk/graph.hpp"
#include "aptrisk/harness.hpp"
#include "aptrisk/optimizer.hpp"
#include "aptrisk/random.hpp"
#include "aptrisk/strategy.hpp"

namespace py = pybind11;
using namespace aptrisk;

namespace {

using Edges = std::vector<std::pair<int, int>>;

// Python callers use 1-based node ids, as in every text format.
Graph graph_from_edges(int n, const Edges& edges) {
  std::vector<Graph::Edge> zero;
  zero.reserve(edges.size());
  for (auto [u, v] : edges) zero.emplace_back(u - 1, v - 1);
  return Graph(n, zero);
}

Edges graph_edges(const Graph& g) {
  Edges out;
  for (auto [u, v] : g.edges()) out.emplace_back(u + 1, v + 1);
  return out;
}

std::vector<double> zeros_if_empty(std::vector<double> c0, const Graph& g) {
  if (c0.empty()) c0.assign(static_cast<std::size_t>(g.node_count()), 0.0);
  return c0;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "APT risk assessment: SCS dynamics, expected loss and hill climbing";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<UsageError>(m, "UsageError", error.ptr());
  auto model = py::register_exception<ModelError>(m, "ModelError", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", model.ptr());
  py::register_exception<IntegrationError>(m, "IntegrationError", error.ptr());

  py::class_<Graph>(m, "Graph")
      .def(py::init(&graph_from_edges), py::arg("nodes"), py::arg("edges"),
           "Graph on nodes 1..n from (u, v) pairs of 1-based ids")
      .def_property_readonly("node_count", &Graph::node_count)
      .def_property_readonly("edge_count", &Graph::edge_count)
      .def_property_readonly("edges", &graph_edges)
      .def("degree", [](const Graph& g, int i) { return g.degree(i - 1); }, py::arg("node"))
      .def("has_edge", [](const Graph& g, int u, int v) { return g.has_edge(u - 1, v - 1); })
      .def("with_edge", [](const Graph& g, int u, int v) { return g.with_edge(u - 1, v - 1); })
      .def("fingerprint", &Graph::fingerprint)
      .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
      .def("__repr__", [](const Graph& g) {
        return "<Graph nodes=" + std::to_string(g.node_count()) +
               " edges=" + std::to_string(g.edge_count()) + ">";
      });

  m.def("degree_weights", [](const Graph& g) { return degree_weights(g).w; });
  m.def("generate_small_world", &generate_small_world, py::arg("n"), py::arg("k"),
        py::arg("rewire_prob"), py::arg("seed"));
  m.def("generate_scale_free", &generate_scale_free, py::arg("n"), py::arg("m"), py::arg("seed"));
  m.def("path_graph", &path_graph);
  m.def("cycle_graph", &cycle_graph);
  m.def("star_graph", &star_graph);
  m.def("complete_graph", &complete_graph);
  m.def("four_node_graph", &four_node_graph);
  m.def("contiguous_usa", &contiguous_usa);
  m.def("read_edge_list", [](const std::string& text) { return read_edge_list(text); });
  m.def("write_edge_list", &write_edge_list);
  m.def("resolve_graph", [](const std::string& source) { return resolve_graph(source); });

  py::class_<ScsParams>(m, "ScsParams")
      .def(py::init([](double alpha, double beta, double delta, double gamma, double horizon) {
             ScsParams p{alpha, beta, delta, gamma, horizon};
             p.validate();
             return p;
           }),
           py::arg("alpha") = 1.0, py::arg("beta") = 1.0, py::arg("delta") = 1.0,
           py::arg("gamma") = 1.0, py::arg("T") = 1.0)
      .def_readwrite("alpha", &ScsParams::alpha)
      .def_readwrite("beta", &ScsParams::beta)
      .def_readwrite("delta", &ScsParams::delta)
      .def_readwrite("gamma", &ScsParams::gamma)
      .def_readwrite("T", &ScsParams::horizon);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("times", &Trajectory::times)
      .def_readonly("states", &Trajectory::states)
      .def_readonly("loss", &Trajectory::loss)
      .def_readonly("loss_integral", &Trajectory::loss_integral)
      .def_readonly("max_excursion", &Trajectory::max_excursion)
      .def_readonly("steps", &Trajectory::steps);

  m.def(
      "integrate",
      [](const Graph& g, const ScsParams& p, const std::vector<double>& x,
         std::vector<double> c0, double step, bool full) {
        c0 = zeros_if_empty(std::move(c0), g);
        if (step <= 0.0) step = default_step(p.horizon);
        return integrate(g, degree_weights(g), p, x, c0, step,
                         full ? Storage::kFull : Storage::kDecimated);
      },
      py::arg("graph"), py::arg("params"), py::arg("x"), py::arg("c0") = std::vector<double>{},
      py::arg("step") = 0.0, py::arg("full") = false);
  m.def(
      "expected_loss",
      [](const Graph& g, const ScsParams& p, const std::vector<double>& x,
         std::vector<double> c0, double step) {
        c0 = zeros_if_empty(std::move(c0), g);
        if (step <= 0.0) step = default_step(p.horizon);
        return expected_loss(g, degree_weights(g), p, x, c0, step);
      },
      py::arg("graph"), py::arg("params"), py::arg("x"), py::arg("c0") = std::vector<double>{},
      py::arg("step") = 0.0);

  py::class_<AttackStrategy>(m, "AttackStrategy")
      .def(py::init<std::vector<double>, double>(), py::arg("x"), py::arg("budget"))
      .def_property_readonly("x", &AttackStrategy::vector)
      .def_property_readonly("budget", &AttackStrategy::budget)
      .def("transfer", [](const AttackStrategy& s, int from, int to,
                          double eps) { return s.transfer(from - 1, to - 1, eps); })
      .def("__len__", &AttackStrategy::size)
      .def("__eq__", [](const AttackStrategy& a, const AttackStrategy& b) { return a == b; });

  m.def("epsilon_neighbors", &epsilon_neighbors, py::arg("x"), py::arg("eps"));
  m.def(
      "random_strategy",
      [](int n, double budget, std::uint64_t seed) {
        Rng rng(seed);
        return random_strategy(n, budget, rng);
      },
      py::arg("n"), py::arg("budget"), py::arg("seed"));
  m.def(
      "heuristic_strategy",
      [](const std::string& name, const Graph& g, double budget) {
        return heuristic_strategy(parse_strategy_kind(name), degree_weights(g), budget);
      },
      py::arg("name"), py::arg("graph"), py::arg("budget"));

  py::class_<RaModel>(m, "RaModel")
      .def(py::init([](Graph g, ScsParams p, double budget, std::vector<double> c0) {
             return RaModel::make(std::move(g), p, budget, std::move(c0));
           }),
           py::arg("graph"), py::arg("params"), py::arg("budget"),
           py::arg("c0") = std::vector<double>{})
      .def_readonly("graph", &RaModel::graph)
      .def_readonly("params", &RaModel::params)
      .def_readonly("budget", &RaModel::budget)
      .def_readonly("c0", &RaModel::c0);

  py::class_<HillClimbOptions>(m, "HillClimbOptions")
      .def(py::init<>())
      .def_readwrite("eps_min", &HillClimbOptions::eps_min)
      .def_readwrite("initial_eps_fraction", &HillClimbOptions::initial_eps_fraction)
      .def_readwrite("improvement_tol", &HillClimbOptions::improvement_tol)
      .def_readwrite("search_step", &HillClimbOptions::search_step)
      .def_readwrite("final_step", &HillClimbOptions::final_step)
      .def_readwrite("candidate_batch", &HillClimbOptions::candidate_batch);

  py::class_<RiskReport>(m, "RiskReport")
      .def_readonly("strategy", &RiskReport::strategy)
      .def_readonly("loss", &RiskReport::loss)
      .def_readonly("cost_benefit", &RiskReport::cost_benefit)
      .def_readonly("evaluations", &RiskReport::evaluations)
      .def_readonly("moves", &RiskReport::moves)
      .def_readonly("epsilon_trace", &RiskReport::epsilon_trace)
      .def_readonly("seed", &RiskReport::seed)
      .def_readonly("restart_losses", &RiskReport::restart_losses)
      .def_readonly("restart_spread", &RiskReport::restart_spread)
      .def_readonly("max_excursion", &RiskReport::max_excursion);

  m.def("hill_climb", &hill_climb, py::arg("model"), py::arg("seed") = 1,
        py::arg("options") = HillClimbOptions{}, py::call_guard<py::gil_scoped_release>());
  m.def("assess_risk", &assess_risk, py::arg("model"), py::arg("restarts") = 3,
        py::arg("seed") = 1, py::arg("options") = HillClimbOptions{},
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "grid_oracle",
      [](const RaModel& model, double resolution, double step) {
        const GridResult r = grid_oracle(model, resolution, step);
        return py::make_tuple(r.strategy, r.loss, r.points);
      },
      py::arg("model"), py::arg("resolution"), py::arg("step") = 0.0);
  m.def("report_json", &report_json, py::arg("model"), py::arg("report"));
}
