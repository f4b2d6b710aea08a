#include "aptrisk/strategy.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>

#include "aptrisk/error.hpp"
#include "aptrisk/format.hpp"
#include "aptrisk/random.hpp"

namespace aptrisk {

namespace {

double total(std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0); }

void check_budget(double budget) {
  if (!(std::isfinite(budget) && budget > 0.0)) {
    throw ModelError("attack budget must be finite and positive");
  }
}

}  // namespace

AttackStrategy::AttackStrategy(std::vector<double> x, double budget, bool)
    : x_(std::move(x)), budget_(budget) {}

AttackStrategy::AttackStrategy(std::vector<double> x, double budget)
    : x_(std::move(x)), budget_(budget) {
  check_budget(budget);
  if (x_.empty()) throw ModelError("strategy must cover at least one node");
  for (double v : x_) {
    if (!(std::isfinite(v) && v >= 0.0)) {
      throw ModelError("strategy entries must be finite and nonnegative");
    }
  }
  if (std::abs(total(x_) - budget) > kBudgetTolerance * budget) {
    throw ModelError("strategy sums to " + format_double(total(x_)) + ", not the budget " +
                     format_double(budget));
  }
}

AttackStrategy AttackStrategy::normalized(std::vector<double> x, double budget) {
  check_budget(budget);
  const double sum = total(x);
  if (!(sum > 0.0)) throw ModelError("cannot normalize an all-zero allocation");
  for (double& v : x) {
    if (!(std::isfinite(v) && v >= 0.0)) {
      throw ModelError("strategy entries must be finite and nonnegative");
    }
    v *= budget / sum;
  }
  return AttackStrategy(std::move(x), budget);
}

AttackStrategy AttackStrategy::transfer(int from, int to, double eps) const {
  std::vector<double> y = x_;
  y[from] -= eps;
  y[to] += eps;
  if (std::abs(total(y) - budget_) > 0.5 * kBudgetTolerance * budget_) {
    const double scale = budget_ / total(y);
    for (double& v : y) v *= scale;
  }
  return AttackStrategy(std::move(y), budget_, true);
}

std::vector<AttackStrategy> epsilon_neighbors(const AttackStrategy& x, double eps) {
  const int n = static_cast<int>(x.size());
  std::vector<AttackStrategy> out;
  out.reserve(epsilon_neighbor_count(x, eps));
  for (int j = 0; j < n; ++j) {
    if (x[j] < eps) continue;
    for (int i = 0; i < n; ++i) {
      if (i != j) out.push_back(x.transfer(j, i, eps));
    }
  }
  return out;
}

std::size_t epsilon_neighbor_count(const AttackStrategy& x, double eps) {
  const auto donors = std::count_if(x.values().begin(), x.values().end(),
                                    [eps](double v) { return v >= eps; });
  return static_cast<std::size_t>(donors) * (x.size() - 1);
}

AttackStrategy random_strategy(int n, double budget, Rng& rng) {
  if (n < 1) throw ModelError("strategy must cover at least one node");
  std::vector<double> spacing(n);
  double sum = 0.0;
  do {
    sum = 0.0;
    for (double& v : spacing) {
      v = -std::log(rng.uniform_open_low());
      sum += v;
    }
  } while (!(sum > 0.0));
  return AttackStrategy::normalized(std::move(spacing), budget);
}

namespace {

AttackStrategy single_target(std::size_t n, std::size_t target, double budget) {
  std::vector<double> x(n, 0.0);
  x[target] = budget;
  return AttackStrategy(std::move(x), budget);
}

}  // namespace

AttackStrategy hs_strategy(const SecurityLevels& w, double budget) {
  const auto it = std::max_element(w.w.begin(), w.w.end());  // first maximum
  return single_target(w.size(), static_cast<std::size_t>(it - w.w.begin()), budget);
}

AttackStrategy ls_strategy(const SecurityLevels& w, double budget) {
  const auto it = std::min_element(w.w.begin(), w.w.end());  // first minimum
  return single_target(w.size(), static_cast<std::size_t>(it - w.w.begin()), budget);
}

AttackStrategy sf_strategy(const SecurityLevels& w, double budget) {
  check_budget(budget);
  const double sum = total(w.w);
  std::vector<double> x(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) x[i] = budget * w[i] / sum;
  return AttackStrategy(std::move(x), budget);
}

AttackStrategy sl_strategy(const SecurityLevels& w, double budget) {
  check_budget(budget);
  double sum = 0.0;
  for (double wi : w.w) sum += 1.0 / wi;
  std::vector<double> x(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) x[i] = budget * (1.0 / w[i]) / sum;
  return AttackStrategy(std::move(x), budget);
}

AttackStrategy un_strategy(int n, double budget) {
  check_budget(budget);
  if (n < 1) throw ModelError("strategy must cover at least one node");
  return AttackStrategy(std::vector<double>(n, budget / n), budget);
}

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kHC: return "HC";
    case StrategyKind::kHS: return "HS";
    case StrategyKind::kLS: return "LS";
    case StrategyKind::kSF: return "SF";
    case StrategyKind::kSL: return "SL";
    case StrategyKind::kUN: return "UN";
  }
  return "?";
}

StrategyKind parse_strategy_kind(std::string_view name) {
  std::string upper(name);
  for (char& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  for (auto kind : {StrategyKind::kHC, StrategyKind::kHS, StrategyKind::kLS, StrategyKind::kSF,
                    StrategyKind::kSL, StrategyKind::kUN}) {
    if (upper == to_string(kind)) return kind;
  }
  throw UsageError("unknown strategy '" + std::string(name) + "'");
}

AttackStrategy heuristic_strategy(StrategyKind kind, const SecurityLevels& w, double budget) {
  switch (kind) {
    case StrategyKind::kHS: return hs_strategy(w, budget);
    case StrategyKind::kLS: return ls_strategy(w, budget);
    case StrategyKind::kSF: return sf_strategy(w, budget);
    case StrategyKind::kSL: return sl_strategy(w, budget);
    case StrategyKind::kUN: return un_strategy(static_cast<int>(w.size()), budget);
    case StrategyKind::kHC: break;
  }
  throw UsageError("HC is computed by the optimizer, not a heuristic rule");
}

std::string write_strategy_csv(const AttackStrategy& x) {
  return "# budget=" + format_double(x.budget()) + "\n" + join_doubles(x.values()) + "\n";
}

namespace {

double parse_double(std::string_view token, std::size_t line) {
  while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front()))) {
    token.remove_prefix(1);
  }
  while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back()))) {
    token.remove_suffix(1);
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    throw ParseError(line, "not a number: '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

AttackStrategy read_strategy_csv(std::string_view text) {
  double budget = -1.0;
  std::vector<double> x;
  bool have_values = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    if (line.front() == '#') {
      const auto key = line.find("budget=");
      if (key != std::string_view::npos) budget = parse_double(line.substr(key + 7), line_no);
      continue;
    }
    if (have_values) throw ParseError(line_no, "expected a single line of values");
    have_values = true;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      x.push_back(parse_double(line.substr(start, comma - start), line_no));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  if (budget < 0.0) throw ModelError("strategy file lacks a '# budget=B' header");
  if (!have_values) throw ModelError("strategy file has no values");
  return AttackStrategy(std::move(x), budget);
}

}  // namespace aptrisk
