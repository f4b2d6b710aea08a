#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aptrisk/graph.hpp"

namespace aptrisk {

class Rng;

/// Relative tolerance on |sum x - B| for membership of the budget simplex.
inline constexpr double kBudgetTolerance = 1e-9;

/// A constant attack allocation x on the simplex {x >= 0 : sum x_i = B}.
class AttackStrategy {
 public:
  /// Throws ModelError if x has a negative entry or misses the budget.
  AttackStrategy(std::vector<double> x, double budget);

  /// Scales a nonnegative vector onto the simplex of the given budget.
  static AttackStrategy normalized(std::vector<double> x, double budget);

  std::span<const double> values() const noexcept { return x_; }
  const std::vector<double>& vector() const noexcept { return x_; }
  double operator[](std::size_t i) const { return x_[i]; }
  std::size_t size() const noexcept { return x_.size(); }
  double budget() const noexcept { return budget_; }

  /// Moves eps of budget from node `from` to node `to`. Requires x[from] >= eps.
  /// Rescales onto the simplex once the sum drifts by half the tolerance.
  AttackStrategy transfer(int from, int to, double eps) const;

  friend bool operator==(const AttackStrategy&, const AttackStrategy&) = default;

 private:
  AttackStrategy(std::vector<double> x, double budget, bool);

  std::vector<double> x_;
  double budget_;
};

/// All strategies reachable by moving eps from a donor j (x_j >= eps) to another
/// node i, ordered lexicographically by (j, i).
std::vector<AttackStrategy> epsilon_neighbors(const AttackStrategy& x, double eps);

/// Number of eps-neighbours without building them.
std::size_t epsilon_neighbor_count(const AttackStrategy& x, double eps);

/// Uniform random point of the simplex (normalized exponential spacings).
AttackStrategy random_strategy(int n, double budget, Rng& rng);

// Heuristic strategies. HS and LS break ties by lowest index.
AttackStrategy hs_strategy(const SecurityLevels& w, double budget);
AttackStrategy ls_strategy(const SecurityLevels& w, double budget);
AttackStrategy sf_strategy(const SecurityLevels& w, double budget);
AttackStrategy sl_strategy(const SecurityLevels& w, double budget);
AttackStrategy un_strategy(int n, double budget);

enum class StrategyKind { kHC, kHS, kLS, kSF, kSL, kUN };

std::string_view to_string(StrategyKind kind);
/// Accepts "HC", "HS", "LS", "SF", "SL", "UN" (case-insensitive).
StrategyKind parse_strategy_kind(std::string_view name);

/// The heuristic named by `kind`. HC is not a heuristic and is rejected.
AttackStrategy heuristic_strategy(StrategyKind kind, const SecurityLevels& w, double budget);

/// "# budget=B" followed by one line of N comma-separated values.
std::string write_strategy_csv(const AttackStrategy& x);
AttackStrategy read_strategy_csv(std::string_view text);

}  // namespace aptrisk
