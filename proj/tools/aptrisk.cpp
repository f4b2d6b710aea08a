// aptrisk command-line tool.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "aptrisk/error.hpp"
#include "aptrisk/format.hpp"
#include "aptrisk/harness.hpp"

namespace {

using namespace aptrisk;

enum Exit { kOk = 0, kUsage = 1, kModel = 2, kViolation = 3 };

struct ModelFlags {
  std::vector<std::string> graphs;
  std::string alpha = "1";
  std::string beta = "1";
  std::string delta = "1";
  std::string gamma = "1";
  std::string horizon = "10";
  std::string budget = "10";
  std::uint64_t seed = 1;
  int restarts = 3;
  double step = 0.0;  // 0: command default
  std::string out;
  bool verbose = false;
};

void add_model_flags(CLI::App* cmd, ModelFlags& f, bool grid) {
  const char* what = grid ? " (list, e.g. \"0.5 1\" or 1..10)" : "";
  auto* g = cmd->add_option("--graph", f.graphs, "Edge-list path or generator spec");
  if (!grid) g->expected(1);
  cmd->add_option("--alpha", f.alpha, std::string("Attack coefficient") + what);
  cmd->add_option("--beta", f.beta, std::string("Infection coefficient") + what);
  cmd->add_option("--delta", f.delta, std::string("Prevention coefficient") + what);
  cmd->add_option("--gamma", f.gamma, std::string("Response coefficient") + what);
  cmd->add_option("--T", f.horizon, std::string("Attack duration") + what);
  cmd->add_option("--B", f.budget, std::string("Attack budget per unit time") + what);
  cmd->add_option("--out", f.out, "Output file (default: stdout)");
  cmd->add_flag("-v,--verbose", f.verbose, "Progress messages on stderr");
}

void add_search_flags(CLI::App* cmd, ModelFlags& f) {
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_option("--restarts", f.restarts, "Hill-climbing restarts")->check(CLI::PositiveNumber);
}

double single(const std::string& text, const char* name) {
  const auto values = parse_value_list(text);
  if (values.size() != 1) throw UsageError(std::string("--") + name + " takes one value here");
  return values.front();
}

ScsParams single_params(const ModelFlags& f) {
  ScsParams p{single(f.alpha, "alpha"), single(f.beta, "beta"), single(f.delta, "delta"),
              single(f.gamma, "gamma"), single(f.horizon, "T")};
  p.validate();
  return p;
}

Graph single_graph(const ModelFlags& f) {
  if (f.graphs.size() != 1) throw UsageError("--graph is required");
  return resolve_graph(f.graphs.front());
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::fwrite(content.data(), 1, content.size(), stdout);
    std::fflush(stdout);
  } else {
    write_file_atomic(path, content);
  }
}

ProgressFn progress_of(const ModelFlags& f) {
  if (!f.verbose) return {};
  return [](const std::string& message) { std::cerr << message << '\n'; };
}

std::vector<double> number_list(std::string_view text) {
  std::string spaced(text);
  for (char& ch : spaced) {
    if (ch == ',') ch = ' ';
  }
  return parse_value_list(spaced);
}

bool looks_numeric(std::string_view text) {
  return !text.empty() && text.find_first_not_of("0123456789.,eE+- ") == std::string_view::npos;
}

// --strategy: a heuristic name, a comma list of values, or a strategy CSV file.
AttackStrategy strategy_from(const std::string& text, const SecurityLevels& w,
                             std::optional<double> budget) {
  if (text.empty()) throw UsageError("--strategy is required");
  if (looks_numeric(text)) {
    auto x = number_list(text);
    if (x.size() != w.size()) {
      throw UsageError("--strategy has " + std::to_string(x.size()) + " values for " +
                       std::to_string(w.size()) + " nodes");
    }
    double sum = 0.0;
    for (double v : x) sum += v;
    return AttackStrategy(std::move(x), budget.value_or(sum));
  }
  try {
    const StrategyKind kind = parse_strategy_kind(text);
    if (kind == StrategyKind::kHC) throw UsageError("use 'assess' to compute the HC strategy");
    return heuristic_strategy(kind, w, budget.value_or(10.0));
  } catch (const UsageError&) {
    std::ifstream in(text, std::ios::binary);
    if (!in) throw UsageError("unknown strategy '" + text + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    AttackStrategy x = read_strategy_csv(buffer.str());
    if (budget && std::abs(*budget - x.budget()) > kBudgetTolerance * *budget) {
      throw UsageError("strategy file budget differs from --B");
    }
    return x;
  }
}

std::vector<double> initial_state(const std::string& text, int n) {
  if (text.empty()) return std::vector<double>(n, 0.0);
  auto c = number_list(text);
  if (c.size() == 1) return std::vector<double>(n, c.front());
  if (c.size() != static_cast<std::size_t>(n)) throw UsageError("--c0 needs 1 or N values");
  return c;
}

bool given(const CLI::App* cmd, const std::string& name) {
  const CLI::Option* opt = cmd->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

// Builds an experiment from --spec, or from the model flags when absent.
ExperimentSpec experiment_from(const std::string& spec_path, const ModelFlags& f,
                               const CLI::App* cmd, ExperimentKind kind) {
  static const char* kGridFlags[] = {"--graph", "--alpha", "--beta", "--delta",
                                     "--gamma", "--T",     "--B"};
  ExperimentSpec spec;
  if (!spec_path.empty()) {
    for (const char* flag : kGridFlags) {
      if (given(cmd, flag)) {
        throw UsageError(std::string(flag) + " cannot be combined with --spec");
      }
    }
    spec = load_experiment_spec(spec_path);
    if (spec.kind != kind) {
      throw UsageError("spec '" + spec_path + "' is a " + std::string(to_string(spec.kind)) +
                       " experiment, not " + std::string(to_string(kind)));
    }
  } else {
    spec.name = std::string(to_string(kind));
    spec.kind = kind;
    spec.graphs = f.graphs;
    ParamGrid grid{parse_value_list(f.alpha), parse_value_list(f.beta),
                   parse_value_list(f.delta), parse_value_list(f.gamma),
                   parse_value_list(f.horizon), parse_value_list(f.budget)};
    spec.grids.push_back(std::move(grid));
  }
  if (given(cmd, "--seed")) spec.seed = f.seed;
  if (given(cmd, "--restarts")) spec.restarts = f.restarts;
  if (given(cmd, "--step")) spec.hc.final_step = f.step;
  if (given(cmd, "--out")) spec.output = f.out;
  spec.validate();
  return spec;
}

std::string summary_path(const std::string& path) {
  const auto dot = path.rfind('.');
  const auto slash = path.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + "_summary";
  }
  return path.substr(0, dot) + "_summary" + path.substr(dot);
}

int run(int argc, char** argv) {
  CLI::App app{"Risk assessment under advanced persistent threats: SCS dynamics, expected "
               "loss, hill-climbing risk estimates and the experiment suite."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "aptrisk 0.1.0");

  ModelFlags f;
  std::string strategy;
  std::string c0;
  std::string spec_path;
  std::string sweep;
  std::string strategies;
  std::string strategy_out;
  bool full = false;
  double eps_min = 1e-6;
  double search_step = 0.02;
  int divisions = 0;
  int trials = 50;

  auto* generate = app.add_subcommand("generate", "Write a graph as an edge list");
  generate->add_option("--graph", f.graphs, "Generator spec or edge-list path")->required();
  generate->add_option("--out", f.out, "Output file (default: stdout)");

  auto* simulate = app.add_subcommand("simulate", "Integrate one trajectory to CSV");
  add_model_flags(simulate, f, false);
  simulate->add_option("--strategy", strategy, "HS|LS|SF|SL|UN, values \"x1,x2,..\", or CSV file")
      ->required();
  simulate->add_option("--c0", c0, "Initial state: one value or N values (default 0)");
  simulate->add_option("--step", f.step, "ODE step (default min(0.01, T/1000))");
  simulate->add_flag("--full", full, "Store every step instead of <= 2001 points");

  auto* loss = app.add_subcommand("loss", "Expected loss of one strategy");
  add_model_flags(loss, f, false);
  loss->add_option("--strategy", strategy, "HS|LS|SF|SL|UN, values \"x1,x2,..\", or CSV file")
      ->required();
  loss->add_option("--c0", c0, "Initial state: one value or N values (default 0)");
  loss->add_option("--step", f.step, "ODE step (default min(0.01, T/1000))");

  auto* assess = app.add_subcommand("assess", "Hill-climb one model; JSON risk report");
  add_model_flags(assess, f, false);
  add_search_flags(assess, f);
  assess->add_option("--c0", c0, "Initial state: one value or N values (default 0)");
  assess->add_option("--step", f.step, "ODE step for the reported loss (default 0.005)");
  assess->add_option("--search-step", search_step, "ODE step while searching");
  assess->add_option("--eps-min", eps_min, "Final neighbourhood radius");
  assess->add_option("--strategy-out", strategy_out, "Also write the HC strategy as CSV");

  auto* compare = app.add_subcommand("compare", "HC versus heuristic strategies (CSV)");
  add_model_flags(compare, f, true);
  add_search_flags(compare, f);
  compare->add_option("--spec", spec_path, "Experiment spec file");
  compare->add_option("--strategies", strategies, "Subset of HC HS LS SF SL UN");
  compare->add_option("--step", f.step, "ODE step for reported losses (default 0.005)");

  auto* scan = app.add_subcommand("scan", "Loss on a simplex lattice; count local maxima");
  add_model_flags(scan, f, true);
  scan->add_option("--spec", spec_path, "Experiment spec file");
  scan->add_option("--divisions", divisions, "Lattice spacing is B / divisions")
      ->check(CLI::PositiveNumber);

  auto* sweep_cmd = app.add_subcommand("sweep", "HC cost benefit over B or T (CSV)");
  add_model_flags(sweep_cmd, f, true);
  add_search_flags(sweep_cmd, f);
  sweep_cmd->add_option("--spec", spec_path, "Experiment spec file");
  sweep_cmd->add_option("--sweep", sweep, "Swept variable when both vary")
      ->check(CLI::IsMember({"B", "T"}));
  sweep_cmd->add_option("--step", f.step, "ODE step for reported losses (default 0.005)");

  auto* theorems = app.add_subcommand("check-theorems", "Randomized monotonicity checks");
  theorems->add_option("--trials", trials, "Trials per theorem")->check(CLI::PositiveNumber);
  theorems->add_option("--seed", f.seed, "Random seed");
  theorems->add_option("--out", f.out, "JSON report file (default: stdout)");
  theorems->add_flag("-v,--verbose", f.verbose, "Progress messages on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (generate->parsed()) {
    if (f.graphs.size() != 1) throw UsageError("generate takes one --graph");
    emit(f.out, write_edge_list(resolve_graph(f.graphs.front())));
    return kOk;
  }

  if (simulate->parsed() || loss->parsed()) {
    const Graph g = single_graph(f);
    const ScsParams p = single_params(f);
    const SecurityLevels w = degree_weights(g);
    auto* cmd = simulate->parsed() ? simulate : loss;
    std::optional<double> budget;
    if (given(cmd, "--B")) budget = single(f.budget, "B");
    const AttackStrategy x = strategy_from(strategy, w, budget);
    const auto state = initial_state(c0, g.node_count());
    const double step = f.step > 0.0 ? f.step : default_step(p.horizon);
    const Trajectory traj =
        integrate(g, w, p, x.values(), state, step, full ? Storage::kFull : Storage::kDecimated);
    if (simulate->parsed()) {
      emit(f.out, trajectory_csv(traj));
    } else {
      nlohmann::ordered_json j;
      j["loss"] = traj.loss_integral;
      j["cost_benefit"] = traj.loss_integral / (x.budget() * p.horizon);
      j["strategy"] = x.vector();
      j["step"] = step;
      j["max_excursion"] = traj.max_excursion;
      j["graph_hash"] = g.fingerprint();
      emit(f.out, j.dump(2) + "\n");
    }
    return kOk;
  }

  if (assess->parsed()) {
    const Graph g = single_graph(f);
    const RaModel model = RaModel::make(g, single_params(f), single(f.budget, "B"),
                                        initial_state(c0, g.node_count()));
    HillClimbOptions options;
    options.eps_min = eps_min;
    options.search_step = search_step;
    if (f.step > 0.0) options.final_step = f.step;
    const RiskReport report = assess_risk(model, f.restarts, f.seed, options);
    if (!strategy_out.empty()) write_file_atomic(strategy_out, write_strategy_csv(report.strategy));
    emit(f.out, report_json(model, report));
    return kOk;
  }

  if (compare->parsed()) {
    ExperimentSpec spec = experiment_from(spec_path, f, compare, ExperimentKind::kCompare);
    if (!strategies.empty()) {
      spec.strategies.clear();
      std::string spaced = strategies;
      for (char& ch : spaced) {
        if (ch == ',') ch = ' ';
      }
      std::istringstream in(spaced);
      for (std::string s; in >> s;) spec.strategies.push_back(parse_strategy_kind(s));
    } else if (spec_path.empty()) {
      spec.strategies = {StrategyKind::kHC, StrategyKind::kHS, StrategyKind::kLS,
                         StrategyKind::kSF, StrategyKind::kSL, StrategyKind::kUN};
    }
    spec.validate();
    emit(spec.output, compare_csv(run_compare(spec, progress_of(f))));
    return kOk;
  }

  if (scan->parsed()) {
    ExperimentSpec spec = experiment_from(spec_path, f, scan, ExperimentKind::kScan);
    if (divisions > 0) spec.divisions = divisions;
    const ScanResult result = run_unimodality_scan(spec, progress_of(f));
    const std::string summary = scan_summary_csv(result);
    if (!spec.output.empty() && spec.output != "-") {
      write_file_atomic(spec.output, scan_lattice_csv(result));
      write_file_atomic(summary_path(spec.output), summary);
    }
    emit("", summary);
    return kOk;
  }

  if (sweep_cmd->parsed()) {
    ExperimentSpec spec = experiment_from(spec_path, f, sweep_cmd, ExperimentKind::kSweep);
    if (!sweep.empty()) spec.sweep = sweep;
    emit(spec.output, sweep_csv(run_cost_benefit_sweep(spec, progress_of(f))));
    return kOk;
  }

  if (theorems->parsed()) {
    const TheoremReport report = run_theorem_checks(f.seed, trials, progress_of(f));
    emit(f.out, theorem_report_json(report));
    for (const TheoremSummary& s : report.theorems) {
      std::cerr << "theorem " << s.theorem << ": " << s.trials << " trials, " << s.checks
                << " checks, " << s.violations << " violations\n";
    }
    return report.ok() ? kOk : kViolation;
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const aptrisk::UsageError& e) {
    std::cerr << "aptrisk: " << e.what() << '\n';
    return kUsage;
  } catch (const aptrisk::Error& e) {
    std::cerr << "aptrisk: " << e.what() << '\n';
    return kModel;
  } catch (const std::exception& e) {
    std::cerr << "aptrisk: " << e.what() << '\n';
    return kModel;
  }
}
