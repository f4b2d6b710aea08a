#include "aptrisk/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "aptrisk/error.hpp"
#include "aptrisk/random.hpp"

namespace aptrisk {

RaModel RaModel::make(Graph graph, ScsParams params, double budget, StateVector c0) {
  const int n = graph.node_count();
  if (c0.empty()) c0.assign(n, 0.0);
  SecurityLevels levels = degree_weights(graph);
  RaModel model{std::move(graph), params, budget, std::move(c0), std::move(levels)};
  model.validate();
  return model;
}

void RaModel::validate() const {
  params.validate();
  if (!(std::isfinite(budget) && budget > 0.0)) throw ModelError("budget must be positive");
  const auto n = static_cast<std::size_t>(graph.node_count());
  if (c0.size() != n) throw ModelError("initial state length does not match the graph");
  if (levels.size() != n) throw ModelError("security levels do not match the graph");
}

namespace {

double search_step(const RaModel& m, double step) { return std::min(step, m.params.horizon); }

}  // namespace

namespace {

// One donor -> recipient transfer, indexed j * n + i.
struct Move {
  int from;
  int to;
};

}  // namespace

RiskReport hill_climb(const RaModel& model, std::uint64_t seed, const HillClimbOptions& options) {
  model.validate();
  const double budget = model.budget;
  if (!(options.eps_min > 0.0) || options.eps_min > budget) {
    throw ModelError("eps_min must lie in (0, B]");
  }
  if (options.candidate_batch < 0) throw ModelError("candidate_batch must be nonnegative");
  const int n = model.node_count();
  LossEvaluator evaluate(model.graph, model.levels, model.params, model.c0,
                         search_step(model, options.search_step));

  Rng rng(seed);
  AttackStrategy x = random_strategy(n, budget, rng);
  double loss = evaluate(x.values());

  RiskReport report{x, 0.0, 0.0, 0, 0, {}, seed, {}, 0.0, 0.0};
  // Gain of every transfer as last measured; stale after a move, used only to
  // pick which neighbours to try first.
  std::vector<double> gain(static_cast<std::size_t>(n) * n,
                           -std::numeric_limits<double>::infinity());
  std::vector<Move> moves;
  std::vector<std::vector<double>> candidates;
  std::vector<double> losses;
  std::vector<std::size_t> order;

  auto evaluate_moves = [&](double eps) {
    candidates.clear();
    for (auto [j, i] : moves) candidates.push_back(x.transfer(j, i, eps).vector());
    losses.resize(candidates.size());
    evaluate.evaluate(candidates, losses);
    std::size_t best = 0;
    for (std::size_t k = 0; k < moves.size(); ++k) {
      gain[static_cast<std::size_t>(moves[k].from) * n + moves[k].to] = losses[k] - loss;
      if (losses[k] > losses[best]) best = k;
    }
    return best;
  };
  auto try_apply = [&](std::size_t best, double eps) {
    if (moves.empty() || !(losses[best] > loss + options.improvement_tol)) return false;
    x = x.transfer(moves[best].from, moves[best].to, eps);
    loss = losses[best];
    ++report.moves;
    return true;
  };

  double eps = std::max(budget * options.initial_eps_fraction, options.eps_min);
  while (true) {
    while (true) {
      // Cheap pass: the most promising feasible transfers by stale gain.
      order.clear();
      for (int j = 0; j < n; ++j) {
        if (x[j] < eps) continue;
        for (int i = 0; i < n; ++i) {
          const std::size_t k = static_cast<std::size_t>(j) * n + i;
          if (i != j && gain[k] > 0.0) order.push_back(k);
        }
      }
      const std::size_t take = std::min<std::size_t>(order.size(), options.candidate_batch);
      std::partial_sort(order.begin(), order.begin() + take, order.end(),
                        [&](std::size_t a, std::size_t b) {
                          return gain[a] != gain[b] ? gain[a] > gain[b] : a < b;
                        });
      moves.clear();
      for (std::size_t k = 0; k < take; ++k) {
        moves.push_back({static_cast<int>(order[k] / n), static_cast<int>(order[k] % n)});
      }
      if (take > 0 && try_apply(evaluate_moves(eps), eps)) continue;

      // Full pass over the neighbourhood; failing it certifies this radius.
      moves.clear();
      for (int j = 0; j < n; ++j) {
        if (x[j] < eps) continue;
        for (int i = 0; i < n; ++i) {
          if (i != j) moves.push_back({j, i});
        }
      }
      if (moves.empty()) break;
      if (!try_apply(evaluate_moves(eps), eps)) break;
    }
    report.epsilon_trace.emplace_back(eps, loss);
    if (eps <= options.eps_min) break;
    eps = std::max(0.5 * eps, options.eps_min);
  }

  LossEvaluator final_eval(model.graph, model.levels, model.params, model.c0,
                           search_step(model, options.final_step));
  report.loss = final_eval(x.values());
  report.strategy = std::move(x);
  report.cost_benefit = report.loss / (budget * model.params.horizon);
  report.evaluations = evaluate.evaluations() + final_eval.evaluations();
  report.max_excursion = std::max(evaluate.max_excursion(), final_eval.max_excursion());
  report.restart_losses = {report.loss};
  return report;
}

RiskReport assess_risk(const RaModel& model, int restarts, std::uint64_t seed,
                       const HillClimbOptions& options) {
  if (restarts < 1) throw UsageError("restarts must be at least 1");
  RiskReport best = hill_climb(model, seed, options);
  std::vector<double> losses{best.loss};
  std::size_t evaluations = best.evaluations;
  double excursion = best.max_excursion;
  for (int r = 1; r < restarts; ++r) {
    RiskReport run = hill_climb(model, seed + static_cast<std::uint64_t>(r), options);
    losses.push_back(run.loss);
    evaluations += run.evaluations;
    excursion = std::max(excursion, run.max_excursion);
    if (run.loss > best.loss) best = std::move(run);
  }
  const auto [lo, hi] = std::minmax_element(losses.begin(), losses.end());
  best.restart_spread = *hi > 0.0 ? (*hi - *lo) / *hi : 0.0;
  best.restart_losses = std::move(losses);
  best.evaluations = evaluations;
  best.max_excursion = excursion;
  return best;
}

std::vector<std::vector<int>> simplex_lattice(int parts, int units) {
  std::vector<std::vector<int>> out;
  if (parts < 1 || units < 0) return out;
  std::vector<int> current(parts, 0);
  // Recursive fill: leading coordinates ascend lexicographically.
  auto fill = [&](auto&& self, int index, int remaining) -> void {
    if (index == parts - 1) {
      current[index] = remaining;
      out.push_back(current);
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      current[index] = k;
      self(self, index + 1, remaining - k);
    }
  };
  fill(fill, 0, units);
  return out;
}

int lattice_units(double budget, double resolution) {
  if (!(resolution > 0.0) || resolution > budget * (1.0 + 1e-12)) {
    throw UsageError("lattice resolution must lie in (0, B]");
  }
  const double ratio = budget / resolution;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-6 * std::max(1.0, ratio) || rounded > 1e7) {
    throw UsageError("B / resolution must be a (moderate) integer");
  }
  return static_cast<int>(rounded);
}

GridResult grid_oracle(const RaModel& model, double resolution, double step) {
  model.validate();
  const int n = model.node_count();
  if (n > 4) throw ModelError("grid oracle is limited to N <= 4 nodes");
  const int units = lattice_units(model.budget, resolution);
  if (step <= 0.0) step = default_step(model.params.horizon);

  const auto lattice = simplex_lattice(n, units);
  std::vector<std::vector<double>> points;
  points.reserve(lattice.size());
  for (const auto& k : lattice) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = model.budget * k[i] / units;
    points.push_back(std::move(x));
  }
  std::vector<double> losses(points.size());
  LossEvaluator evaluate(model.graph, model.levels, model.params, model.c0, step);
  evaluate.evaluate(points, losses);
  const auto best = std::max_element(losses.begin(), losses.end()) - losses.begin();
  return GridResult{AttackStrategy::normalized(points[best], model.budget), losses[best],
                    points.size()};
}

std::string report_json(const RaModel& model, const RiskReport& report) {
  nlohmann::ordered_json j;
  j["strategy"] = report.strategy.vector();
  j["budget"] = model.budget;
  j["loss"] = report.loss;
  j["cost_benefit"] = report.cost_benefit;
  j["evaluations"] = report.evaluations;
  j["moves"] = report.moves;
  auto trace = nlohmann::ordered_json::array();
  for (auto [eps, loss] : report.epsilon_trace) trace.push_back({eps, loss});
  j["epsilon_trace"] = trace;
  j["seed"] = report.seed;
  j["restart_losses"] = report.restart_losses;
  j["restart_spread"] = report.restart_spread;
  j["max_excursion"] = report.max_excursion;
  j["model"] = {
      {"graph_hash", model.graph.fingerprint()},
      {"nodes", model.graph.node_count()},
      {"edges", model.graph.edge_count()},
      {"alpha", model.params.alpha},
      {"beta", model.params.beta},
      {"delta", model.params.delta},
      {"gamma", model.params.gamma},
      {"T", model.params.horizon},
      {"B", model.budget},
  };
  return j.dump(2) + "\n";
}

}  // namespace aptrisk
