#include "aptrisk/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "aptrisk/error.hpp"
#include "aptrisk/format.hpp"

namespace aptrisk {

void ScsParams::validate() const {
  const std::array<std::pair<const char*, double>, 5> fields = {
      {{"alpha", alpha}, {"beta", beta}, {"delta", delta}, {"gamma", gamma}, {"T", horizon}}};
  for (auto [name, value] : fields) {
    if (!(std::isfinite(value) && value > 0.0)) {
      throw ModelError(std::string(name) + " must be finite and positive");
    }
  }
}

namespace {

void check_dimensions(const Graph& g, const SecurityLevels& w, std::span<const double> x,
                      std::span<const double> c) {
  const auto n = static_cast<std::size_t>(g.node_count());
  if (w.size() != n || x.size() != n || c.size() != n) {
    throw ModelError("dimension mismatch: graph has " + std::to_string(n) + " nodes, w has " +
                     std::to_string(w.size()) + ", x has " + std::to_string(x.size()) +
                     ", state has " + std::to_string(c.size()));
  }
  for (double wi : w.w) {
    if (!(wi > 0.0)) throw ModelError("security levels must be positive");
  }
}

void check_state(std::span<const double> c) {
  for (double ci : c) {
    if (!(ci >= 0.0 && ci <= 1.0)) throw ModelError("initial state must lie in [0, 1]");
  }
}

std::size_t step_count(double horizon, double step) {
  const double ratio = horizon / step;
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(ratio - 1e-9 * std::max(1.0, ratio))));
}

// Model coefficients in the form the inner loop wants.
struct Kernel {
  int n;
  const int* offsets;
  const int* adjacency;
  const double* weight;
  const double* attack_scale;
  const double* response;
  double beta;
};

// Lanes of one node packed into a single compiler vector; GCC and Clang split
// it into whatever registers the target has.
typedef double Pack4 __attribute__((vector_size(4 * sizeof(double))));
typedef double Pack8 __attribute__((vector_size(8 * sizeof(double))));

template <int Lanes>
struct PackOf;
template <>
struct PackOf<1> {
  using type = double;
};
template <>
struct PackOf<4> {
  using type = Pack4;
};
template <>
struct PackOf<8> {
  using type = Pack8;
};
template <int Lanes>
using Pack = typename PackOf<Lanes>::type;

// Element access that also works for Pack<1>, which the compiler treats as a plain double.
template <typename P>
double& lane(P& p, int k) {
  return reinterpret_cast<double*>(&p)[k];
}
template <typename P>
double lane(const P& p, int k) {
  return reinterpret_cast<const double*>(&p)[k];
}

// Right-hand side for `Lanes` independent states; s[i] holds node i of every lane.
// Also returns the loss rate sum_i w_i s_i per lane.
template <int Lanes>
[[gnu::always_inline]] inline Pack<Lanes> derivative(const Kernel& kn, const Pack<Lanes>* attack, const Pack<Lanes>* s,
                       Pack<Lanes>* out) {
  Pack<Lanes> loss_rate = {};
  for (int i = 0; i < kn.n; ++i) {
    Pack<Lanes> infected = {};
    for (int e = kn.offsets[i]; e < kn.offsets[i + 1]; ++e) infected += s[kn.adjacency[e]];
    const Pack<Lanes> si = s[i];
    out[i] = kn.attack_scale[i] * (attack[i] + kn.beta * infected) * (1.0 - si) -
             kn.response[i] * si;
    loss_rate += kn.weight[i] * si;
  }
  return loss_rate;
}

// Classical RK4 over [0, horizon] for `Lanes` strategies at once.
// `attack` holds alpha * x_i per lane; `c` is the state, updated in place.
// observe(step_index, t, c, loss) runs after every step.
template <int Lanes, typename Observer>
void rk4_lanes(const Kernel& kn, const Pack<Lanes>* attack, Pack<Lanes>* c, double horizon,
               double step, Pack<Lanes>& loss, double& excursion, Observer&& observe) {
  using P = Pack<Lanes>;
  const std::size_t n = static_cast<std::size_t>(kn.n);
  std::vector<P> stage(n), slope(n), sum(n);

  const std::size_t steps = step_count(horizon, step);
  loss = P{};
  P worst = {};
  for (std::size_t s = 0; s < steps; ++s) {
    const bool last = s + 1 == steps;
    const double h = last ? horizon - static_cast<double>(s) * step : step;
    const double half = 0.5 * h;

    const P r1 = derivative<Lanes>(kn, attack, c, slope.data());
    for (std::size_t i = 0; i < n; ++i) {
      sum[i] = slope[i];
      stage[i] = c[i] + half * slope[i];
    }
    const P r2 = derivative<Lanes>(kn, attack, stage.data(), slope.data());
    for (std::size_t i = 0; i < n; ++i) {
      sum[i] += 2.0 * slope[i];
      stage[i] = c[i] + half * slope[i];
    }
    const P r3 = derivative<Lanes>(kn, attack, stage.data(), slope.data());
    for (std::size_t i = 0; i < n; ++i) {
      sum[i] += 2.0 * slope[i];
      stage[i] = c[i] + h * slope[i];
    }
    const P r4 = derivative<Lanes>(kn, attack, stage.data(), slope.data());

    const double sixth = h / 6.0;
    for (std::size_t i = 0; i < n; ++i) {
      const P v = c[i] + sixth * (sum[i] + slope[i]);
      const P below = -v;
      const P above = v - 1.0;
      worst = worst > below ? worst : below;
      worst = worst > above ? worst : above;
      P clamped = v < 0.0 ? P{} : v;
      clamped = clamped > 1.0 ? P{} + 1.0 : clamped;
      c[i] = clamped;
    }
    loss += sixth * (r1 + 2.0 * r2 + 2.0 * r3 + r4);

    bool finite = true;
    for (int k = 0; k < Lanes; ++k) {
      finite = finite && std::isfinite(lane(loss, k)) && std::isfinite(lane(worst, k));
    }
    const double t = last ? horizon : static_cast<double>(s + 1) * step;
    if (!finite) {
      throw IntegrationError("non-finite state at t = " + std::to_string(t) +
                             "; the step size is probably too large");
    }
    observe(s + 1, t, c, loss);
  }
  for (int k = 0; k < Lanes; ++k) excursion = std::max(excursion, lane(worst, k));
}

void check_step(double step, double horizon) {
  if (!(std::isfinite(step) && step > 0.0)) throw ModelError("step must be positive");
  if (step > horizon) throw ModelError("step must not exceed the horizon T");
}

}  // namespace

std::vector<double> scs_derivative(std::span<const double> state, const Graph& g,
                                   const SecurityLevels& w, const ScsParams& p,
                                   std::span<const double> x) {
  check_dimensions(g, w, x, state);
  std::vector<double> out(state.size());
  for (int i = 0; i < g.node_count(); ++i) {
    double infected = 0.0;
    for (int j : g.neighbors(i)) infected += state[j];
    out[i] = (p.alpha * x[i] + p.beta * infected) * (1.0 - state[i]) / (p.delta * w[i]) -
             p.gamma * w[i] * state[i];
  }
  return out;
}

double default_step(double horizon) { return std::min(0.01, horizon / 1000.0); }

Trajectory integrate(const Graph& g, const SecurityLevels& w, const ScsParams& p,
                     std::span<const double> x, std::span<const double> c0, double step,
                     Storage storage) {
  p.validate();
  check_dimensions(g, w, x, c0);
  check_state(c0);
  check_step(step, p.horizon);

  const int n = g.node_count();
  std::vector<double> attack(n), scale(n), response(n);
  for (int i = 0; i < n; ++i) {
    attack[i] = p.alpha * x[i];
    scale[i] = 1.0 / (p.delta * w[i]);
    response[i] = p.gamma * w[i];
  }
  const Kernel kn{n, g.offsets().data(), g.adjacency().data(), w.w.data(), scale.data(),
                  response.data(), p.beta};

  const std::size_t steps = step_count(p.horizon, step);
  const std::size_t stride =
      storage == Storage::kFull ? 1 : std::max<std::size_t>(1, (steps + 1999) / 2000);

  Trajectory traj;
  traj.steps = steps;
  traj.times.push_back(0.0);
  traj.states.emplace_back(c0.begin(), c0.end());
  traj.loss.push_back(0.0);

  using P = Pack<1>;
  std::vector<P> packed_attack(n), c(n);
  for (int i = 0; i < n; ++i) {
    lane(packed_attack[i], 0) = attack[i];
    lane(c[i], 0) = c0[i];
  }
  P loss = {};
  rk4_lanes<1>(kn, packed_attack.data(), c.data(), p.horizon, step, loss, traj.max_excursion,
               [&](std::size_t s, double t, const P* state, const P& l) {
                 if (s % stride == 0 || s == steps) {
                   traj.times.push_back(t);
                   StateVector& row = traj.states.emplace_back(n);
                   for (int i = 0; i < n; ++i) row[i] = lane(state[i], 0);
                   traj.loss.push_back(lane(l, 0));
                 }
               });
  traj.loss_integral = lane(loss, 0);
  return traj;
}

double expected_loss(const Graph& g, const SecurityLevels& w, const ScsParams& p,
                     std::span<const double> x, std::span<const double> c0) {
  return expected_loss(g, w, p, x, c0, default_step(p.horizon));
}

double expected_loss(const Graph& g, const SecurityLevels& w, const ScsParams& p,
                     std::span<const double> x, std::span<const double> c0, double step) {
  LossEvaluator evaluator(g, w, p, c0, step);
  return evaluator(x);
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::string out = "t";
  const std::size_t n = trajectory.states.empty() ? 0 : trajectory.states.front().size();
  for (std::size_t i = 1; i <= n; ++i) out += ",C_" + std::to_string(i);
  out += ",loss_integral\n";
  for (std::size_t r = 0; r < trajectory.times.size(); ++r) {
    out += format_double(trajectory.times[r]);
    for (double v : trajectory.states[r]) {
      out += ',';
      out += format_double(v);
    }
    out += ',';
    out += format_double(trajectory.loss[r]);
    out += '\n';
  }
  return out;
}

LossEvaluator::LossEvaluator(const Graph& g, const SecurityLevels& w, const ScsParams& p,
                             std::span<const double> c0, double step)
    : node_count_(g.node_count()),
      offsets_(g.offsets()),
      adjacency_(g.adjacency()),
      weight_(w.w),
      c0_(c0.begin(), c0.end()),
      params_(p),
      step_(step) {
  p.validate();
  check_dimensions(g, w, c0, c0);
  check_state(c0);
  check_step(step, p.horizon);
  attack_scale_.resize(node_count_);
  response_.resize(node_count_);
  for (int i = 0; i < node_count_; ++i) {
    attack_scale_[i] = 1.0 / (p.delta * w[i]);
    response_[i] = p.gamma * w[i];
  }
}

double LossEvaluator::operator()(std::span<const double> x) {
  std::vector<std::vector<double>> one{std::vector<double>(x.begin(), x.end())};
  double out = 0.0;
  evaluate(one, std::span<double>(&out, 1));
  return out;
}

void LossEvaluator::evaluate(std::span<const std::vector<double>> xs, std::span<double> out) {
  if (out.size() != xs.size()) throw ModelError("output span size mismatch");
  for (const auto& x : xs) {
    if (x.size() != static_cast<std::size_t>(node_count_)) {
      throw ModelError("strategy length " + std::to_string(x.size()) + " does not match " +
                       std::to_string(node_count_) + " nodes");
    }
  }
  constexpr std::size_t kWide = 8;
  std::size_t pos = 0;
  while (xs.size() - pos >= kWide) {
    run_batch<kWide>(xs.subspan(pos, kWide), out.subspan(pos, kWide));
    pos += kWide;
  }
  while (xs.size() - pos >= 4) {
    run_batch<4>(xs.subspan(pos, 4), out.subspan(pos, 4));
    pos += 4;
  }
  for (; pos < xs.size(); ++pos) run_batch<1>(xs.subspan(pos, 1), out.subspan(pos, 1));
  evaluations_ += xs.size();
}

template <int Lanes>
void LossEvaluator::run_batch(std::span<const std::vector<double>> xs, std::span<double> out) {
  using P = Pack<Lanes>;
  const std::size_t n = static_cast<std::size_t>(node_count_);
  std::vector<P> attack(n), c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < Lanes; ++k) {
      lane(attack[i], k) = params_.alpha * xs[k][i];
      lane(c[i], k) = c0_[i];
    }
  }
  const Kernel kn{node_count_,          offsets_.data(),  adjacency_.data(), weight_.data(),
                  attack_scale_.data(), response_.data(), params_.beta};
  P loss = {};
  rk4_lanes<Lanes>(kn, attack.data(), c.data(), params_.horizon, step_, loss, max_excursion_,
                   [](std::size_t, double, const P*, const P&) {});
  for (int k = 0; k < Lanes; ++k) out[k] = lane(loss, k);
}

}  // namespace aptrisk
