#include "aptrisk/harness.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "aptrisk/error.hpp"
#include "aptrisk/format.hpp"

namespace aptrisk {

namespace {

std::string params_csv(const std::string& graph, const ParamPoint& p) {
  std::string out = csv_field(graph);
  for (double v : {p.params.alpha, p.params.beta, p.params.delta, p.params.gamma,
                   p.params.horizon, p.budget}) {
    out += ',';
    out += format_double(v);
  }
  return out;
}

std::string describe(const std::string& graph, const ParamPoint& p) {
  return graph + " alpha=" + format_double(p.params.alpha) + " beta=" +
         format_double(p.params.beta) + " delta=" + format_double(p.params.delta) +
         " gamma=" + format_double(p.params.gamma) + " T=" + format_double(p.params.horizon) +
         " B=" + format_double(p.budget);
}

void report(const ProgressFn& progress, const std::string& message) {
  if (progress) progress(message);
}

}  // namespace

std::vector<CompareRow> run_compare(const ExperimentSpec& spec, const ProgressFn& progress) {
  spec.validate();
  std::vector<CompareRow> rows;
  for (const std::string& source : spec.graphs) {
    const Graph g = resolve_graph(source);
    for (const ParamGrid& grid : spec.grids) {
      for (const ParamPoint& point : expand_grid(grid)) {
        const RaModel model = RaModel::make(g, point.params, point.budget);
        const double step = std::min(spec.hc.final_step, point.params.horizon);
        for (StrategyKind kind : spec.strategies) {
          CompareRow row;
          row.graph = source;
          row.point = point;
          row.strategy = kind;
          if (kind == StrategyKind::kHC) {
            const RiskReport r = assess_risk(model, spec.restarts, spec.seed, spec.hc);
            row.allocation = r.strategy.vector();
            row.loss = r.loss;
            row.restart_spread = r.restart_spread;
            row.evaluations = r.evaluations;
            row.max_excursion = r.max_excursion;
          } else {
            const AttackStrategy x = heuristic_strategy(kind, model.levels, point.budget);
            LossEvaluator evaluate(g, model.levels, point.params, model.c0, step);
            row.allocation = x.vector();
            row.loss = evaluate(x.values());
            row.evaluations = 1;
            row.max_excursion = evaluate.max_excursion();
          }
          row.cost_benefit = row.loss / (point.budget * point.params.horizon);
          report(progress, describe(source, point) + " " + std::string(to_string(kind)) +
                               " loss=" + format_double(row.loss));
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
  std::string out =
      "graph,alpha,beta,delta,gamma,T,B,strategy,loss,cost_benefit,restart_spread,evaluations,"
      "max_excursion,allocation\n";
  for (const CompareRow& r : rows) {
    out += params_csv(r.graph, r.point);
    out += ',';
    out += to_string(r.strategy);
    out += ',' + format_double(r.loss) + ',' + format_double(r.cost_benefit) + ',' +
           format_double(r.restart_spread) + ',' + std::to_string(r.evaluations) + ',' +
           format_double(r.max_excursion) + ',' + join_doubles(r.allocation, ' ') + '\n';
  }
  return out;
}

int count_lattice_maxima(const std::vector<std::vector<int>>& lattice,
                         const std::vector<double>& values, const std::vector<bool>& keep) {
  const std::size_t count = lattice.size();
  if (values.size() != count || (!keep.empty() && keep.size() != count)) {
    throw ModelError("lattice and value sizes differ");
  }
  if (count == 0) return 0;
  const std::size_t parts = lattice.front().size();
  const int units = std::accumulate(lattice.front().begin(), lattice.front().end(), 0);
  const auto radix = static_cast<std::uint64_t>(units) + 1;
  auto encode = [&](const std::vector<int>& k) {
    std::uint64_t code = 0;
    for (int v : k) code = code * radix + static_cast<std::uint64_t>(v);
    return code;
  };
  auto kept = [&](std::size_t p) { return keep.empty() || keep[p]; };

  std::unordered_map<std::uint64_t, std::size_t> index;
  index.reserve(count);
  for (std::size_t p = 0; p < count; ++p) {
    if (kept(p)) index.emplace(encode(lattice[p]), p);
  }

  // Union-find over equal-valued neighbours so plateaus count once.
  std::vector<std::size_t> parent(count);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t p) {
    while (parent[p] != p) p = parent[p] = parent[parent[p]];
    return p;
  };
  std::vector<bool> dominated(count, false);
  std::vector<int> k;
  for (std::size_t p = 0; p < count; ++p) {
    if (!kept(p)) continue;
    k = lattice[p];
    for (std::size_t j = 0; j < parts; ++j) {
      if (k[j] == 0) continue;
      for (std::size_t i = 0; i < parts; ++i) {
        if (i == j) continue;
        --k[j];
        ++k[i];
        const auto it = index.find(encode(k));
        --k[i];
        ++k[j];
        if (it == index.end()) continue;
        const std::size_t q = it->second;
        if (values[q] > values[p]) {
          dominated[p] = true;
        } else if (values[q] == values[p]) {
          parent[find(p)] = find(q);
        }
      }
    }
  }
  std::vector<bool> root_dominated(count, false);
  for (std::size_t p = 0; p < count; ++p) {
    if (kept(p) && dominated[p]) root_dominated[find(p)] = true;
  }
  int maxima = 0;
  for (std::size_t p = 0; p < count; ++p) {
    if (kept(p) && find(p) == p && !root_dominated[p]) ++maxima;
  }
  return maxima;
}

ScanResult run_unimodality_scan(const ExperimentSpec& spec, const ProgressFn& progress) {
  spec.validate();
  ScanResult result;
  std::size_t function = 0;
  for (const std::string& source : spec.graphs) {
    const Graph g = resolve_graph(source);
    const int n = g.node_count();
    if (n > 4) {
      throw ModelError("unimodality scan needs N <= 4; '" + source + "' has " +
                       std::to_string(n) + " nodes");
    }
    const auto lattice = simplex_lattice(n, spec.divisions);
    for (const ParamGrid& grid : spec.grids) {
      for (const ParamPoint& point : expand_grid(grid)) {
        ++function;
        const RaModel model = RaModel::make(g, point.params, point.budget);
        std::vector<std::vector<double>> xs;
        xs.reserve(lattice.size());
        for (const auto& k : lattice) {
          std::vector<double> x(n);
          for (int i = 0; i < n; ++i) x[i] = point.budget * k[i] / spec.divisions;
          xs.push_back(std::move(x));
        }
        std::vector<double> losses(xs.size());
        LossEvaluator evaluate(g, model.levels, point.params, model.c0,
                               default_step(point.params.horizon));
        evaluate.evaluate(xs, losses);
        const std::size_t best =
            static_cast<std::size_t>(std::max_element(losses.begin(), losses.end()) - losses.begin());

        auto summarize = [&](const std::string& section, const std::vector<bool>& keep) {
          ScanSummary s;
          s.graph = source;
          s.point = point;
          s.section = section;
          s.points = keep.empty() ? lattice.size()
                                  : static_cast<std::size_t>(std::count(keep.begin(), keep.end(), true));
          s.local_maxima = count_lattice_maxima(lattice, losses, keep);
          std::size_t arg = best;
          if (!keep.empty()) {
            for (std::size_t p = 0; p < lattice.size(); ++p) {
              if (keep[p] && (!keep[arg] || losses[p] > losses[arg])) arg = p;
            }
          }
          s.argmax = xs[arg];
          s.max_loss = losses[arg];
          s.max_excursion = evaluate.max_excursion();
          report(progress, describe(source, point) + " " + section + ": " +
                               std::to_string(s.local_maxima) + " local maxima over " +
                               std::to_string(s.points) + " points");
          result.summaries.push_back(std::move(s));
          for (std::size_t p = 0; p < lattice.size(); ++p) {
            if (keep.empty() ? n <= 3 : keep[p]) {
              result.lattice.push_back({function, section, xs[p], losses[p]});
            }
          }
        };

        summarize("full", {});
        if (n == 4) {
          for (int fixed = 0; fixed < 3; ++fixed) {
            std::vector<bool> keep(lattice.size());
            for (std::size_t p = 0; p < lattice.size(); ++p) {
              keep[p] = lattice[p][fixed] == lattice[best][fixed];
            }
            summarize("x" + std::to_string(fixed + 1), keep);
          }
        }
      }
    }
  }
  return result;
}

std::string scan_summary_csv(const ScanResult& result) {
  std::string out =
      "function,graph,alpha,beta,delta,gamma,T,B,section,points,local_maxima,max_loss,"
      "max_excursion,argmax\n";
  std::size_t function = 0;
  for (std::size_t k = 0; k < result.summaries.size(); ++k) {
    const ScanSummary& s = result.summaries[k];
    if (s.section == "full") ++function;
    out += std::to_string(function) + ',' + params_csv(s.graph, s.point) + ',' + s.section + ',' +
           std::to_string(s.points) + ',' + std::to_string(s.local_maxima) + ',' +
           format_double(s.max_loss) + ',' + format_double(s.max_excursion) + ',' +
           join_doubles(s.argmax, ' ') + '\n';
  }
  return out;
}

std::string scan_lattice_csv(const ScanResult& result) {
  std::size_t width = 0;
  for (const ScanPoint& p : result.lattice) width = std::max(width, p.x.size());
  std::string out = "function,section";
  for (std::size_t i = 1; i <= width; ++i) out += ",x_" + std::to_string(i);
  out += ",loss\n";
  for (const ScanPoint& p : result.lattice) {
    out += std::to_string(p.function) + ',' + p.section;
    for (std::size_t i = 0; i < width; ++i) {
      out += ',';
      if (i < p.x.size()) out += format_double(p.x[i]);
    }
    out += ',' + format_double(p.loss) + '\n';
  }
  return out;
}

char swept_variable(const ExperimentSpec& spec) {
  if (spec.sweep == "B") return 'B';
  if (spec.sweep == "T") return 'T';
  bool b = false;
  bool t = false;
  for (const ParamGrid& g : spec.grids) {
    b = b || g.budget.size() > 1;
    t = t || g.horizon.size() > 1;
  }
  if (b && t) throw UsageError("sweep varies both B and T; set 'sweep = B' or 'sweep = T'");
  if (!b && !t) throw UsageError("sweep varies neither B nor T");
  return b ? 'B' : 'T';
}

std::vector<SweepRow> run_cost_benefit_sweep(const ExperimentSpec& spec,
                                             const ProgressFn& progress) {
  spec.validate();
  const char swept = swept_variable(spec);
  std::vector<SweepRow> rows;
  for (const std::string& source : spec.graphs) {
    const Graph g = resolve_graph(source);
    for (const ParamGrid& grid : spec.grids) {
      const auto& outer = swept == 'B' ? grid.horizon : grid.budget;
      const auto& inner = swept == 'B' ? grid.budget : grid.horizon;
      for (double a : grid.alpha)
        for (double b : grid.beta)
          for (double d : grid.delta)
            for (double c : grid.gamma)
              for (double o : outer)
                for (double v : inner) {
                  const double horizon = swept == 'B' ? o : v;
                  const double budget = swept == 'B' ? v : o;
                  const ParamPoint point{ScsParams{a, b, d, c, horizon}, budget};
                  const RaModel model = RaModel::make(g, point.params, budget);
                  const RiskReport r = assess_risk(model, spec.restarts, spec.seed, spec.hc);
                  SweepRow row{source, point, swept, r.strategy.vector()};
                  row.loss = r.loss;
                  row.cost_benefit = r.cost_benefit;
                  row.restart_spread = r.restart_spread;
                  row.evaluations = r.evaluations;
                  row.max_excursion = r.max_excursion;
                  report(progress, describe(source, point) +
                                       " cost_benefit=" + format_double(row.cost_benefit));
                  rows.push_back(std::move(row));
                }
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "graph,alpha,beta,delta,gamma,T,B,swept,loss,cost_benefit,restart_spread,evaluations,"
      "max_excursion,allocation\n";
  for (const SweepRow& r : rows) {
    out += params_csv(r.graph, r.point) + ',' + r.swept + ',' + format_double(r.loss) + ',' +
           format_double(r.cost_benefit) + ',' + format_double(r.restart_spread) + ',' +
           std::to_string(r.evaluations) + ',' + format_double(r.max_excursion) + ',' +
           join_doubles(r.allocation, ' ') + '\n';
  }
  return out;
}

}  // namespace aptrisk
