#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "aptrisk/dynamics.hpp"
#include "aptrisk/graph.hpp"
#include "aptrisk/optimizer.hpp"
#include "aptrisk/strategy.hpp"

namespace aptrisk {

/// Builds a graph from a source string. Recognised generator specs:
///   sw:n=50,k=4,p=0.2,seed=1   ba:n=50,m=2,seed=1
///   path:n=3  cycle:n=4  star:n=4  complete:n=3  four:3
///   gsw  gsf  usa49            (the Experiment 4-6 networks)
/// Anything else is read as an edge-list file.
Graph resolve_graph(std::string_view source);

/// Values for each model coefficient; a grid is their cartesian product.
struct ParamGrid {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> delta;
  std::vector<double> gamma;
  std::vector<double> horizon;  // T
  std::vector<double> budget;   // B
};

struct ParamPoint {
  ScsParams params;
  double budget = 0.0;
};

enum class ExperimentKind { kCompare, kScan, kSweep };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view name);

struct ExperimentSpec {
  std::string name;
  ExperimentKind kind = ExperimentKind::kCompare;
  std::vector<std::string> graphs;
  std::vector<ParamGrid> grids;
  std::vector<StrategyKind> strategies{StrategyKind::kHC};
  int restarts = 3;
  std::uint64_t seed = 1;
  std::string output;
  std::string sweep;    // "B", "T" or empty (inferred)
  int divisions = 100;  // scan lattice: B / divisions per unit
  HillClimbOptions hc;

  void validate() const;
};

/// Plain-text spec: "key = value" lines, '#' comments, whitespace separated
/// lists, "a..b" integer ranges, and optional "[grid]" sections. Keys before
/// the first section are defaults that every section inherits.
ExperimentSpec parse_experiment_spec(std::string_view text);
ExperimentSpec load_experiment_spec(const std::string& path);

/// Parses "0.5 1 2..4" into {0.5, 1, 2, 3, 4}.
std::vector<double> parse_value_list(std::string_view text);

/// Cartesian product in the order alpha, beta, delta, gamma, T, B (B fastest).
std::vector<ParamPoint> expand_grid(const ParamGrid& grid);

using ProgressFn = std::function<void(const std::string&)>;

struct CompareRow {
  std::string graph;
  ParamPoint point;
  StrategyKind strategy = StrategyKind::kHC;
  std::vector<double> allocation;
  double loss = 0.0;
  double cost_benefit = 0.0;
  double restart_spread = 0.0;  // HC only
  std::size_t evaluations = 0;
  double max_excursion = 0.0;
};

/// Expected loss of every selected strategy in every (graph, grid point) cell.
/// HC goes through assess_risk; heuristics are evaluated at the HC final step.
std::vector<CompareRow> run_compare(const ExperimentSpec& spec, const ProgressFn& progress = {});
std::string compare_csv(const std::vector<CompareRow>& rows);

struct ScanSummary {
  std::string graph;
  ParamPoint point;
  std::string section;  // "full", or "x1" / "x2" / "x3" for N=4 slices
  std::size_t points = 0;
  int local_maxima = 0;
  std::vector<double> argmax;
  double max_loss = 0.0;
  double max_excursion = 0.0;
};

struct ScanPoint {
  std::size_t function = 0;  // index into summaries' function numbering
  std::string section;
  std::vector<double> x;
  double loss = 0.0;
};

struct ScanResult {
  std::vector<ScanSummary> summaries;
  std::vector<ScanPoint> lattice;  // N <= 3: the full lattice; N = 4: the slices
};

/// Loss on the simplex lattice with B / divisions spacing. For N <= 3 the whole
/// lattice is reported; for N = 4 the whole lattice is searched and three
/// slices through its argmax (x_k fixed, k = 1..3) are reported as well.
/// Local maxima are plateau-merged lattice points no lower than every point one
/// unit transfer away.
ScanResult run_unimodality_scan(const ExperimentSpec& spec, const ProgressFn& progress = {});
std::string scan_lattice_csv(const ScanResult& result);
std::string scan_summary_csv(const ScanResult& result);

/// Number of plateau-merged local maxima of `values` on a lattice given as
/// compositions (see simplex_lattice). `keep` restricts the comparison to a
/// subset of points; empty means all.
int count_lattice_maxima(const std::vector<std::vector<int>>& lattice,
                         const std::vector<double>& values, const std::vector<bool>& keep = {});

struct SweepRow {
  std::string graph;
  ParamPoint point;
  char swept = 'B';
  std::vector<double> allocation;
  double loss = 0.0;
  double cost_benefit = 0.0;
  double restart_spread = 0.0;
  std::size_t evaluations = 0;
  double max_excursion = 0.0;
};

/// HC cost benefit over a grid that sweeps exactly one of B or T. Rows are
/// ordered by graph, then the other coordinates, then the swept variable.
std::vector<SweepRow> run_cost_benefit_sweep(const ExperimentSpec& spec,
                                             const ProgressFn& progress = {});
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Which of B or T a sweep spec varies; throws UsageError unless exactly one.
char swept_variable(const ExperimentSpec& spec);

struct TheoremViolation {
  int theorem = 0;
  int trial = 0;
  std::string check;
  std::string record;  // JSON reproduction record
};

struct TheoremSummary {
  int theorem = 0;
  int trials = 0;
  int checks = 0;
  int violations = 0;
};

struct TheoremReport {
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<TheoremSummary> theorems;  // theorems 1..4
  std::vector<TheoremViolation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

/// Randomized monotonicity checks for the four theorems: edges (w fixed at the
/// larger graph's degrees), coefficients and horizon at fixed strategy, and the
/// budget both at fixed (scaled) strategy and at the assess_risk level.
TheoremReport run_theorem_checks(std::uint64_t seed, int trials, const ProgressFn& progress = {});
std::string theorem_report_json(const TheoremReport& report);

/// Writes to a temporary sibling file and renames it into place; creates
/// missing parent directories. No partial file is left on failure.
void write_file_atomic(const std::string& path, std::string_view content);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(std::string_view text);

}  // namespace aptrisk
