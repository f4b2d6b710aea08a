#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "aptrisk/error.hpp"
#include "aptrisk/format.hpp"
#include "aptrisk/harness.hpp"
#include "aptrisk/random.hpp"

namespace aptrisk {

namespace {

constexpr double kStateTol = 1e-9;  // pointwise C_i comparisons
constexpr double kLossTol = 1e-9;   // relative, fixed-strategy losses
constexpr double kRiskTol = 1e-3;   // relative, assess_risk losses
constexpr int kRiskRestarts = 3;

struct Instance {
  Graph graph;
  ScsParams params;
  double budget;
  std::vector<double> x;
  std::vector<double> c0;
};

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(rng.uniform(std::log(lo), std::log(hi)));
}

// Random spanning tree plus extra edges; 2..10 nodes.
Graph random_graph(Rng& rng) {
  const int n = 2 + rng.below(9);
  std::vector<Graph::Edge> edges;
  for (int v = 1; v < n; ++v) edges.emplace_back(rng.below(v), v);
  const double density = rng.uniform(0.0, 0.5);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.bernoulli(density)) edges.emplace_back(u, v);
    }
  }
  return Graph(n, edges);
}

Instance random_instance(Rng& rng) {
  Graph g = random_graph(rng);
  const int n = g.node_count();
  ScsParams p{log_uniform(rng, 0.25, 2.0), log_uniform(rng, 0.25, 2.0),
              log_uniform(rng, 0.25, 2.0), log_uniform(rng, 0.25, 2.0), rng.uniform(2.0, 10.0)};
  const double budget = rng.uniform(1.0, 10.0);
  std::vector<double> x = random_strategy(n, budget, rng).vector();
  std::vector<double> c0(n, 0.0);
  if (rng.bernoulli(0.5)) {
    for (double& c : c0) c = rng.uniform(0.0, 0.5);
  }
  return {std::move(g), p, budget, std::move(x), std::move(c0)};
}

nlohmann::ordered_json instance_json(const Instance& m) {
  nlohmann::ordered_json j;
  j["nodes"] = m.graph.node_count();
  auto edges = nlohmann::ordered_json::array();
  for (auto [u, v] : m.graph.edges()) edges.push_back({u + 1, v + 1});
  j["edges"] = edges;
  j["alpha"] = m.params.alpha;
  j["beta"] = m.params.beta;
  j["delta"] = m.params.delta;
  j["gamma"] = m.params.gamma;
  j["T"] = m.params.horizon;
  j["B"] = m.budget;
  j["x"] = m.x;
  j["c0"] = m.c0;
  return j;
}

// Largest amount by which `low` exceeds `high` at any shared stored point.
double worst_excess(const Trajectory& low, const Trajectory& high) {
  double worst = -INFINITY;
  const std::size_t rows = std::min(low.states.size(), high.states.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < low.states[r].size(); ++i) {
      worst = std::max(worst, low.states[r][i] - high.states[r][i]);
    }
  }
  return worst;
}

class Checker {
 public:
  Checker(TheoremReport& report, int theorem) : report_(report), theorem_(theorem) {}

  // Passes when `low` <= `high` up to the tolerance; otherwise records a violation.
  void expect_le(int trial, const std::string& check, double low, double high, double tol,
                 nlohmann::ordered_json record) {
    ++summary().checks;
    if (low <= high + tol) return;
    ++summary().violations;
    record["theorem"] = theorem_;
    record["trial"] = trial;
    record["check"] = check;
    record["lower"] = low;
    record["upper"] = high;
    report_.violations.push_back({theorem_, trial, check, record.dump()});
  }

  // Expects the smaller model's trajectory below the larger one pointwise and
  // its loss below the larger loss.
  void expect_dominated(int trial, const std::string& check, const Trajectory& low,
                        const Trajectory& high, const nlohmann::ordered_json& record) {
    auto r = record;
    r["max_state_excess"] = worst_excess(low, high);
    expect_le(trial, check + " (states)", worst_excess(low, high), 0.0, kStateTol, r);
    expect_le(trial, check + " (loss)", low.loss_integral, high.loss_integral,
              kLossTol * std::max(1.0, high.loss_integral), record);
  }

  TheoremSummary& summary() { return report_.theorems[static_cast<std::size_t>(theorem_ - 1)]; }

 private:
  TheoremReport& report_;
  int theorem_;
};

Trajectory solve(const Graph& g, const SecurityLevels& w, const ScsParams& p,
                 const std::vector<double>& x, const std::vector<double>& c0) {
  return integrate(g, w, p, x, c0, default_step(p.horizon));
}

void edges_theorem(Checker& check, Rng& rng, int trial) {
  const Instance m = random_instance(rng);
  const int n = m.graph.node_count();
  std::vector<Graph::Edge> missing;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (!m.graph.has_edge(u, v)) missing.emplace_back(u, v);
    }
  }
  auto record = instance_json(m);

  // Re-adding an existing edge gives the same model, hence the same loss.
  const auto [eu, ev] = m.graph.edges()[rng.below(static_cast<int>(m.graph.edge_count()))];
  const Graph same = m.graph.with_edge(eu, ev);
  const SecurityLevels w = degree_weights(m.graph);
  const double base = solve(m.graph, w, m.params, m.x, m.c0).loss_integral;
  const double again = solve(same, degree_weights(same), m.params, m.x, m.c0).loss_integral;
  auto dup = record;
  dup["added"] = {eu + 1, ev + 1};
  check.expect_le(trial, "existing edge: equal loss", std::abs(base - again), 0.0, 0.0, dup);

  if (missing.empty()) return;
  const auto [u, v] = missing[rng.below(static_cast<int>(missing.size()))];
  const Graph bigger = m.graph.with_edge(u, v);
  // Security levels are held at the larger graph's degrees for both models.
  const SecurityLevels wb = degree_weights(bigger);
  record["added"] = {u + 1, v + 1};
  record["w"] = wb.w;
  check.expect_dominated(trial, "new edge", solve(m.graph, wb, m.params, m.x, m.c0),
                         solve(bigger, wb, m.params, m.x, m.c0), record);
}

void coefficients_theorem(Checker& check, Rng& rng, int trial) {
  const Instance m = random_instance(rng);
  const SecurityLevels w = degree_weights(m.graph);
  const Trajectory base = solve(m.graph, w, m.params, m.x, m.c0);
  struct Field {
    const char* name;
    double ScsParams::*member;
    bool raises;  // does a larger value raise the risk?
  };
  for (const Field f : {Field{"alpha", &ScsParams::alpha, true}, Field{"beta", &ScsParams::beta, true},
                        Field{"delta", &ScsParams::delta, false},
                        Field{"gamma", &ScsParams::gamma, false}}) {
    ScsParams larger = m.params;
    const double factor = std::exp(rng.uniform(0.0, std::log(2.0)));
    larger.*f.member *= factor;
    const Trajectory other = solve(m.graph, w, larger, m.x, m.c0);
    auto record = instance_json(m);
    record["field"] = f.name;
    record["larger_value"] = larger.*f.member;
    const std::string name = std::string(f.name) + " increased";
    if (f.raises) {
      check.expect_dominated(trial, name, base, other, record);
    } else {
      check.expect_dominated(trial, name, other, base, record);
    }
  }
}

void horizon_theorem(Checker& check, Rng& rng, int trial) {
  Instance m = random_instance(rng);
  const SecurityLevels w = degree_weights(m.graph);
  double t1 = m.params.horizon;
  double t2 = rng.uniform(2.0, 10.0);
  if (t2 < t1) std::swap(t1, t2);
  ScsParams p1 = m.params;
  ScsParams p2 = m.params;
  p1.horizon = t1;
  p2.horizon = t2;
  // One step size for both so the grids agree on [0, T1].
  const double step = default_step(t1);
  const double l1 = integrate(m.graph, w, p1, m.x, m.c0, step).loss_integral;
  const double l2 = integrate(m.graph, w, p2, m.x, m.c0, step).loss_integral;
  auto record = instance_json(m);
  record["T1"] = t1;
  record["T2"] = t2;
  check.expect_le(trial, "longer horizon", l1, l2, kLossTol * std::max(1.0, l2), record);
}

void budget_theorem(Checker& check, Rng& rng, int trial) {
  const Instance m = random_instance(rng);
  const SecurityLevels w = degree_weights(m.graph);
  const double b2 = m.budget * std::exp(rng.uniform(0.0, std::log(2.0)));
  std::vector<double> scaled = m.x;
  for (double& v : scaled) v *= b2 / m.budget;
  auto record = instance_json(m);
  record["B2"] = b2;
  check.expect_dominated(trial, "scaled strategy", solve(m.graph, w, m.params, m.x, m.c0),
                         solve(m.graph, w, m.params, scaled, m.c0), record);

  const auto seed = static_cast<std::uint64_t>(trial) + 1;
  const RiskReport r1 =
      assess_risk(RaModel::make(m.graph, m.params, m.budget, m.c0), kRiskRestarts, seed);
  const RiskReport r2 = assess_risk(RaModel::make(m.graph, m.params, b2, m.c0), kRiskRestarts, seed);
  record["risk_B1"] = r1.loss;
  record["risk_B2"] = r2.loss;
  record["restarts"] = kRiskRestarts;
  record["seed"] = seed;
  check.expect_le(trial, "risk grows with B", r1.loss, r2.loss, kRiskTol * r2.loss,
                  record);
}

}  // namespace

TheoremReport run_theorem_checks(std::uint64_t seed, int trials, const ProgressFn& progress) {
  if (trials < 1) throw UsageError("trials must be at least 1");
  TheoremReport report;
  report.seed = seed;
  report.trials = trials;
  for (int t = 1; t <= 4; ++t) report.theorems.push_back({t, trials, 0, 0});

  using Check = void (*)(Checker&, Rng&, int);
  const Check checks[] = {edges_theorem, coefficients_theorem, horizon_theorem, budget_theorem};
  for (int t = 1; t <= 4; ++t) {
    Rng rng(seed * 4 + static_cast<std::uint64_t>(t - 1));
    Checker checker(report, t);
    for (int trial = 0; trial < trials; ++trial) checks[t - 1](checker, rng, trial);
    if (progress) {
      const TheoremSummary& s = checker.summary();
      progress("theorem " + std::to_string(t) + ": " + std::to_string(s.checks) + " checks, " +
               std::to_string(s.violations) + " violations");
    }
  }
  return report;
}

std::string theorem_report_json(const TheoremReport& report) {
  nlohmann::ordered_json j;
  j["seed"] = report.seed;
  j["trials"] = report.trials;
  auto theorems = nlohmann::ordered_json::array();
  for (const TheoremSummary& s : report.theorems) {
    theorems.push_back({{"theorem", s.theorem},
                        {"trials", s.trials},
                        {"checks", s.checks},
                        {"violations", s.violations}});
  }
  j["theorems"] = theorems;
  auto violations = nlohmann::ordered_json::array();
  for (const TheoremViolation& v : report.violations) {
    violations.push_back(nlohmann::ordered_json::parse(v.record));
  }
  j["violations"] = violations;
  return j.dump(2) + "\n";
}

}  // namespace aptrisk
