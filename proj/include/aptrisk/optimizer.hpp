#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "aptrisk/dynamics.hpp"
#include "aptrisk/graph.hpp"
#include "aptrisk/strategy.hpp"

namespace aptrisk {

/// One risk-assessment instance: maximize the expected loss over the budget simplex.
struct RaModel {
  Graph graph;
  ScsParams params;
  double budget;
  StateVector c0;         // initial compromise probabilities
  SecurityLevels levels;  // node degrees unless overridden

  /// Model with degree security levels and c0 = 0 unless given.
  static RaModel make(Graph graph, ScsParams params, double budget, StateVector c0 = {});

  int node_count() const noexcept { return graph.node_count(); }
  void validate() const;
};

struct HillClimbOptions {
  double eps_min = 1e-6;           // last neighbourhood radius
  double initial_eps_fraction = 1.0 / 16.0;  // first radius as a fraction of B
  double improvement_tol = 1e-12;  // a move must gain more than this
  double search_step = 0.02;       // ODE step while searching
  double final_step = 0.005;       // ODE step for the reported loss
  int candidate_batch = 16;        // transfers tried before a full pass; 0 = pure steepest ascent
};

struct RiskReport {
  AttackStrategy strategy;
  double loss = 0.0;          // expected loss of `strategy`, at the final step
  double cost_benefit = 0.0;  // loss / (B T)
  std::size_t evaluations = 0;
  std::size_t moves = 0;
  std::vector<std::pair<double, double>> epsilon_trace;  // (eps, loss) per radius
  std::uint64_t seed = 0;
  std::vector<double> restart_losses;  // one per restart, in restart order
  double restart_spread = 0.0;         // (max - min) / max over restarts
  double max_excursion = 0.0;          // worst clamping excursion seen
};

/// Hill climbing over eps-neighbourhoods from a seeded uniform random start.
/// Each step moves to an improving neighbour: first the best of the
/// `candidate_batch` transfers with the largest previously measured gains, else
/// the best of the whole neighbourhood. The radius starts at
/// B * initial_eps_fraction and halves only after a full pass finds no
/// improvement; the final radius is exactly eps_min.
RiskReport hill_climb(const RaModel& model, std::uint64_t seed,
                      const HillClimbOptions& options = {});

/// Best of `restarts` hill climbs seeded seed, seed + 1, ...
RiskReport assess_risk(const RaModel& model, int restarts, std::uint64_t seed,
                       const HillClimbOptions& options = {});

struct GridResult {
  AttackStrategy strategy;
  double loss = 0.0;
  std::size_t points = 0;
};

/// Exhaustive search of the simplex lattice {x : x_i = k_i * resolution}.
/// B / resolution must be an integer. Limited to N <= 4. `step` <= 0 selects
/// the default ODE step.
GridResult grid_oracle(const RaModel& model, double resolution, double step = 0.0);

/// Compositions of `units` into `parts` nonnegative integers, lexicographic order.
std::vector<std::vector<int>> simplex_lattice(int parts, int units);

/// Integer number of lattice units B / resolution; throws UsageError otherwise.
int lattice_units(double budget, double resolution);

/// JSON record: strategy, loss, cost_benefit, evaluations, epsilon_trace, seed,
/// and a model fingerprint (graph hash and parameters).
std::string report_json(const RaModel& model, const RiskReport& report);

}  // namespace aptrisk
