#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "aptrisk/graph.hpp"

namespace aptrisk {

/// Coefficients of the Secure-Compromised-Secure model plus the horizon T.
struct ScsParams {
  double alpha = 1.0;    // attack coefficient
  double beta = 1.0;     // infection coefficient
  double delta = 1.0;    // prevention coefficient
  double gamma = 1.0;    // response coefficient
  double horizon = 1.0;  // attack duration T

  /// Throws ModelError unless every field is finite and strictly positive.
  void validate() const;
};

/// Per-node compromise probabilities C_i(t), each in [0, 1].
using StateVector = std::vector<double>;

struct Trajectory {
  std::vector<double> times;               // times[0] == 0, times.back() == T
  std::vector<StateVector> states;         // one state per stored time point
  std::vector<double> loss;                // running loss integral at each stored time
  double loss_integral = 0.0;              // value at T
  double max_excursion = 0.0;              // largest unclamped step result outside [0, 1]
  std::size_t steps = 0;                   // integrator steps taken
};

enum class Storage {
  kDecimated,  // at most 2001 stored points, always including t = 0 and t = T
  kFull,       // every step
};

/// dC_i/dt = [alpha x_i + beta sum_j a_ji C_j] (1 - C_i) / (delta w_i) - gamma w_i C_i.
std::vector<double> scs_derivative(std::span<const double> state, const Graph& g,
                                   const SecurityLevels& w, const ScsParams& p,
                                   std::span<const double> x);

/// h = min(0.01, T / 1000).
double default_step(double horizon);

/// Fixed-step classical RK4 on the state plus the loss quadrature dL/dt = sum w_i C_i.
/// States are clamped to [0, 1] after each step; the last step is shortened so the
/// final time is exactly T. Throws IntegrationError on non-finite values.
Trajectory integrate(const Graph& g, const SecurityLevels& w, const ScsParams& p,
                     std::span<const double> x, std::span<const double> c0, double step,
                     Storage storage = Storage::kDecimated);

/// L(x) = integral over [0, T] of sum_i w_i C_i(t), with the default step.
double expected_loss(const Graph& g, const SecurityLevels& w, const ScsParams& p,
                     std::span<const double> x, std::span<const double> c0);

double expected_loss(const Graph& g, const SecurityLevels& w, const ScsParams& p,
                     std::span<const double> x, std::span<const double> c0, double step);

/// CSV with header "t,C_1,...,C_N,loss_integral".
std::string trajectory_csv(const Trajectory& trajectory);

/// Evaluates the expected loss of many strategies on one fixed model.
///
/// Strategies are integrated in lanes of a structure-of-arrays batch so the
/// adjacency gather is shared across lanes. Results match integrate() to
/// rounding. Tracks the number of evaluations and the worst clamping excursion.
class LossEvaluator {
 public:
  LossEvaluator(const Graph& g, const SecurityLevels& w, const ScsParams& p,
                std::span<const double> c0, double step);

  double operator()(std::span<const double> x);

  /// Fills out[k] with the loss of xs[k].
  void evaluate(std::span<const std::vector<double>> xs, std::span<double> out);

  int node_count() const noexcept { return node_count_; }
  double step() const noexcept { return step_; }
  std::size_t evaluations() const noexcept { return evaluations_; }
  double max_excursion() const noexcept { return max_excursion_; }

 private:
  template <int Lanes>
  void run_batch(std::span<const std::vector<double>> xs, std::span<double> out);

  int node_count_;
  std::vector<int> offsets_;
  std::vector<int> adjacency_;
  std::vector<double> weight_;         // w_i
  std::vector<double> attack_scale_;   // 1 / (delta w_i)
  std::vector<double> response_;       // gamma w_i
  std::vector<double> c0_;
  ScsParams params_;
  double step_;
  std::size_t evaluations_ = 0;
  double max_excursion_ = 0.0;
};

}  // namespace aptrisk
