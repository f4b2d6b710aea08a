#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "aptrisk/dynamics.hpp"
#include "aptrisk/error.hpp"
#include "aptrisk/random.hpp"
#include "aptrisk/strategy.hpp"

using namespace aptrisk;

namespace {

const ScsParams kUnit{1, 1, 1, 1, 10};

// Root of f on [lo, hi] by bisection; f(lo) and f(hi) differ in sign.
template <class F>
double bisect(F f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Dense-matrix RK4 reference, written independently of the library integrator.
double reference_loss(const Graph& g, const ScsParams& p, const std::vector<double>& x,
                      double h) {
  const int n = g.node_count();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (auto [u, v] : g.edges()) a[u][v] = a[v][u] = 1.0;
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = std::accumulate(a[i].begin(), a[i].end(), 0.0);

  auto f = [&](const std::vector<double>& y) {
    std::vector<double> d(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
      double infection = 0.0;
      for (int j = 0; j < n; ++j) infection += a[j][i] * y[j];
      d[i] = (p.alpha * x[i] + p.beta * infection) * (1 - y[i]) / (p.delta * w[i]) -
             p.gamma * w[i] * y[i];
      d[n] += w[i] * y[i];
    }
    return d;
  };
  std::vector<double> y(n + 1, 0.0);
  const long steps = std::lround(p.horizon / h);
  for (long s = 0; s < steps; ++s) {
    auto axpy = [&](const std::vector<double>& k, double c) {
      std::vector<double> r(y);
      for (int i = 0; i <= n; ++i) r[i] += c * k[i];
      return r;
    };
    const auto k1 = f(y);
    const auto k2 = f(axpy(k1, h / 2));
    const auto k3 = f(axpy(k2, h / 2));
    const auto k4 = f(axpy(k3, h));
    for (int i = 0; i <= n; ++i) y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return y[n];
}

}  // namespace

TEST(ScsDerivative, Examples) {
  const Graph g = path_graph(3);
  const SecurityLevels w = degree_weights(g);
  const ScsParams p{0.7, 1.3, 0.9, 1.1, 5};
  const std::vector<double> zero(3, 0.0);
  EXPECT_EQ(scs_derivative(zero, g, w, p, zero), zero);

  const std::vector<double> ones(3, 1.0);
  const std::vector<double> x{2, 3, 4};
  const auto d = scs_derivative(ones, g, w, p, x);
  for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(d[i], -p.gamma * w[i]);

  const Graph two = path_graph(2);
  for (double b : {0.0, 1.0, 7.5}) {
    const std::vector<double> xb{b, 0.0};
    EXPECT_EQ(scs_derivative(std::vector<double>{0, 0}, two, degree_weights(two), kUnit, xb),
              (std::vector<double>{b, 0.0}));
  }
}

TEST(ScsDerivative, DimensionMismatch) {
  const Graph g = path_graph(2);
  EXPECT_THROW(scs_derivative(std::vector<double>{0, 0, 0}, g, degree_weights(g), kUnit,
                              std::vector<double>{1, 1}),
               ModelError);
}

TEST(Integrate, ZeroAttackStaysAtRest) {
  const Graph g = star_graph(5);
  const std::vector<double> zero(5, 0.0);
  const Trajectory t = integrate(g, degree_weights(g), kUnit, zero, zero, 0.01);
  EXPECT_EQ(t.loss_integral, 0.0);
  for (const auto& s : t.states) EXPECT_EQ(s, zero);
  EXPECT_EQ(expected_loss(g, degree_weights(g), kUnit, zero, zero), 0.0);
}

TEST(Integrate, SymmetricFixedPoint) {
  // 1 - c - c^2 = 0 is the symmetric equilibrium of the unit 2-node model with x = (1, 1).
  const double root = bisect([](double c) { return 1 - c - c * c; }, 0.0, 1.0);
  EXPECT_NEAR(root, (std::sqrt(5.0) - 1) / 2, 1e-15);
  const Graph g = path_graph(2);
  ScsParams p = kUnit;
  p.horizon = 50;
  const std::vector<double> x{1, 1}, c0{0, 0};
  const Trajectory t = integrate(g, degree_weights(g), p, x, c0, default_step(50));
  EXPECT_EQ(t.times.back(), 50.0);
  EXPECT_NEAR(t.states.back()[0], root, 1e-6);
  EXPECT_NEAR(t.states.back()[1], root, 1e-6);
}

TEST(Integrate, StepHalvingConvergence) {
  const Graph g = path_graph(2);
  const SecurityLevels w = degree_weights(g);
  const std::vector<double> x{1, 1}, c0{0, 0};
  const double h = default_step(kUnit.horizon);
  EXPECT_NEAR(expected_loss(g, w, kUnit, x, c0, h), expected_loss(g, w, kUnit, x, c0, h / 2),
              1e-8);

  const double l1 = expected_loss(g, w, kUnit, x, c0, 0.4);
  const double l2 = expected_loss(g, w, kUnit, x, c0, 0.2);
  const double l3 = expected_loss(g, w, kUnit, x, c0, 0.1);
  EXPECT_GE(std::abs(l1 - l2) / std::abs(l2 - l3), 8.0);
}

TEST(ExpectedLoss, MatchesFineStepReference) {
  const Graph g = path_graph(2);
  const std::vector<double> x{1, 1}, c0{0, 0};
  const double reference = reference_loss(g, kUnit, x, 1e-4);
  EXPECT_NEAR(expected_loss(g, degree_weights(g), kUnit, x, c0), reference, 1e-6);
}

TEST(ExpectedLoss, MatchesReferenceOnAsymmetricGraph) {
  const Graph g = four_node_graph(3);
  const ScsParams p{0.5, 1.5, 0.75, 1.25, 4};
  const std::vector<double> x{3, 0.5, 0, 1.5}, c0(4, 0.0);
  EXPECT_NEAR(expected_loss(g, degree_weights(g), p, x, c0), reference_loss(g, p, x, 1e-4),
              1e-6);
}

TEST(ExpectedLoss, BoundedByHorizonTimesTotalWeight) {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = generate_scale_free(8, 1 + trial % 3, static_cast<std::uint64_t>(trial));
    const SecurityLevels w = degree_weights(g);
    const ScsParams p{rng.uniform(0.1, 5), rng.uniform(0.1, 5), rng.uniform(0.1, 2),
                      rng.uniform(0.1, 2), rng.uniform(1, 10)};
    const auto x = random_strategy(8, rng.uniform(1, 50), rng).vector();
    std::vector<double> c0(8);
    for (double& c : c0) c = rng.uniform();
    const double bound = p.horizon * std::accumulate(w.w.begin(), w.w.end(), 0.0);
    const Trajectory t = integrate(g, w, p, x, c0, default_step(p.horizon));
    EXPECT_GE(t.loss_integral, 0.0);
    EXPECT_LE(t.loss_integral, bound);
    EXPECT_LE(t.max_excursion, 1e-9);
    for (const auto& s : t.states) {
      for (double c : s) {
        EXPECT_GE(c, 0.0);
        EXPECT_LE(c, 1.0);
      }
    }
  }
}

TEST(ExpectedLoss, MonotoneInInitialCondition) {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = generate_small_world(10, 4, 0.3, static_cast<std::uint64_t>(trial));
    const SecurityLevels w = degree_weights(g);
    const ScsParams p{rng.uniform(0.25, 2), rng.uniform(0.25, 2), rng.uniform(0.25, 2),
                      rng.uniform(0.25, 2), rng.uniform(1, 8)};
    const auto x = random_strategy(10, rng.uniform(1, 10), rng).vector();
    std::vector<double> low(10), high(10);
    for (int i = 0; i < 10; ++i) {
      low[i] = rng.uniform(0, 0.5);
      high[i] = low[i] + rng.uniform(0, 0.5);
    }
    EXPECT_LE(expected_loss(g, w, p, x, low), expected_loss(g, w, p, x, high) + 1e-9);
  }
}

TEST(Integrate, TrajectoryStorage) {
  const Graph g = path_graph(3);
  const SecurityLevels w = degree_weights(g);
  ScsParams p = kUnit;
  p.horizon = 50;
  const std::vector<double> x{1, 2, 3}, c0(3, 0.0);
  const Trajectory dec = integrate(g, w, p, x, c0, 0.01);
  const Trajectory full = integrate(g, w, p, x, c0, 0.01, Storage::kFull);
  EXPECT_EQ(dec.steps, 5000u);
  EXPECT_LE(dec.times.size(), 2001u);
  EXPECT_EQ(dec.times.front(), 0.0);
  EXPECT_EQ(dec.times.back(), 50.0);
  EXPECT_EQ(full.times.size(), full.steps + 1);
  EXPECT_EQ(full.states.size(), full.times.size());
  EXPECT_EQ(full.loss.size(), full.times.size());
  EXPECT_EQ(dec.loss_integral, full.loss_integral);
  EXPECT_EQ(dec.states.back(), full.states.back());
  for (std::size_t k = 1; k < full.times.size(); ++k) {
    EXPECT_GT(full.times[k], full.times[k - 1]);
    EXPECT_GE(full.loss[k], full.loss[k - 1]);
  }
}

TEST(Integrate, ShortenedLastStep) {
  const Graph g = path_graph(2);
  ScsParams p = kUnit;
  p.horizon = 1.05;
  const std::vector<double> x{1, 0}, c0{0, 0};
  const Trajectory t = integrate(g, degree_weights(g), p, x, c0, 0.1, Storage::kFull);
  EXPECT_EQ(t.steps, 11u);
  EXPECT_EQ(t.times.back(), 1.05);
}

TEST(Integrate, Errors) {
  const Graph g = path_graph(2);
  const SecurityLevels w = degree_weights(g);
  const std::vector<double> x{1, 1}, c0{0, 0};
  ScsParams huge = kUnit;
  huge.alpha = 1e300;
  EXPECT_THROW(integrate(g, w, huge, std::vector<double>{1e10, 1e10}, c0, 0.01),
               IntegrationError);
  ScsParams bad = kUnit;
  bad.gamma = 0;
  EXPECT_THROW(integrate(g, w, bad, x, c0, 0.01), ModelError);
  EXPECT_THROW(integrate(g, w, kUnit, x, std::vector<double>{0, 1.5}, 0.01), ModelError);
  EXPECT_THROW(integrate(g, w, kUnit, x, std::vector<double>{0}, 0.01), ModelError);
  EXPECT_THROW(integrate(g, w, kUnit, x, c0, 0.0), ModelError);
}

TEST(Integrate, DefaultStep) {
  EXPECT_EQ(default_step(10), 0.01);
  EXPECT_EQ(default_step(50), 0.01);
  EXPECT_EQ(default_step(2), 0.002);
}

TEST(TrajectoryCsv, Header) {
  const Graph g = path_graph(2);
  ScsParams p = kUnit;
  p.horizon = 0.02;
  const std::vector<double> x{1, 0}, c0{0, 0};
  const Trajectory t = integrate(g, degree_weights(g), p, x, c0, 0.01, Storage::kFull);
  const std::string csv = trajectory_csv(t);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,C_1,C_2,loss_integral");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_EQ(csv.substr(csv.find('\n') + 1, 10), "0,0,0,0\n0.");
}

TEST(LossEvaluator, MatchesIntegrate) {
  const Graph g = generate_scale_free(20, 2, 5);
  const SecurityLevels w = degree_weights(g);
  const ScsParams p{1, 0.5, 1, 0.5, 5};
  std::vector<double> c0(20, 0.0);
  c0[3] = 0.25;
  Rng rng(1);
  // 13 strategies exercise the 8-, 4- and 1-lane paths.
  std::vector<std::vector<double>> xs;
  for (int k = 0; k < 13; ++k) xs.push_back(random_strategy(20, 10, rng).vector());
  LossEvaluator eval(g, w, p, c0, 0.02);
  std::vector<double> out(xs.size());
  eval.evaluate(xs, out);
  EXPECT_EQ(eval.evaluations(), 13u);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double single = integrate(g, w, p, xs[k], c0, 0.02).loss_integral;
    EXPECT_NEAR(out[k], single, 1e-12 * single);
    EXPECT_NEAR(eval(xs[k]), single, 1e-12 * single);
  }
  EXPECT_EQ(eval.evaluations(), 26u);
  EXPECT_LE(eval.max_excursion(), 1e-9);
}
