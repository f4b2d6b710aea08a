#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "aptrisk/error.hpp"
#include "aptrisk/harness.hpp"

namespace aptrisk {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, std::string_view seps) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto start = s.find_first_not_of(seps, pos);
    if (start == std::string_view::npos) break;
    auto end = s.find_first_of(seps, start);
    if (end == std::string_view::npos) end = s.size();
    out.push_back(s.substr(start, end - start));
    pos = end;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view token, T& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size() && !token.empty();
}

double number_arg(std::string_view token, std::string_view what) {
  double v = 0.0;
  if (!parse_number(token, v)) {
    throw UsageError("bad number '" + std::string(token) + "' for " + std::string(what));
  }
  return v;
}

int int_arg(std::string_view token, std::string_view what) {
  int v = 0;
  if (!parse_number(token, v)) {
    throw UsageError("bad integer '" + std::string(token) + "' for " + std::string(what));
  }
  return v;
}

// "n=50,k=4" -> {n: 50, k: 4}
std::map<std::string, std::string, std::less<>> generator_args(std::string_view body,
                                                               std::string_view source) {
  std::map<std::string, std::string, std::less<>> out;
  for (auto part : split(body, ",")) {
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("graph spec '" + std::string(source) + "': expected key=value, got '" +
                       std::string(part) + "'");
    }
    out.emplace(std::string(trim(part.substr(0, eq))), std::string(trim(part.substr(eq + 1))));
  }
  return out;
}

}  // namespace

Graph resolve_graph(std::string_view source) {
  source = trim(source);
  if (source == "gsw") return generate_small_world(50, 4, 0.2, 1);
  if (source == "gsf") return generate_scale_free(50, 2, 1);
  if (source == "usa49") return contiguous_usa();

  const auto colon = source.find(':');
  const auto kind = source.substr(0, colon);
  static constexpr std::string_view kKinds[] = {"sw", "ba", "path", "cycle", "star", "complete",
                                                "four"};
  if (colon == std::string_view::npos ||
      std::find(std::begin(kKinds), std::end(kKinds), kind) == std::end(kKinds)) {
    return load_edge_list(std::string(source));
  }
  const auto body = source.substr(colon + 1);
  if (kind == "four") return four_node_graph(int_arg(body, "four"));

  auto args = generator_args(body, source);
  auto take = [&](std::string_view key, std::string_view fallback = {}) -> std::string {
    auto it = args.find(key);
    if (it == args.end()) {
      if (fallback.empty()) {
        throw UsageError("graph spec '" + std::string(source) + "' needs " + std::string(key));
      }
      return std::string(fallback);
    }
    std::string v = it->second;
    args.erase(it);
    return v;
  };
  const int n = int_arg(take("n"), "n");
  Graph g = [&] {
    if (kind == "sw") {
      const int k = int_arg(take("k", "4"), "k");
      const double p = number_arg(take("p", "0.2"), "p");
      std::uint64_t seed = 0;
      if (!parse_number(take("seed", "1"), seed)) throw UsageError("bad seed in graph spec");
      return generate_small_world(n, k, p, seed);
    }
    if (kind == "ba") {
      const int m = int_arg(take("m", "2"), "m");
      std::uint64_t seed = 0;
      if (!parse_number(take("seed", "1"), seed)) throw UsageError("bad seed in graph spec");
      return generate_scale_free(n, m, seed);
    }
    if (kind == "path") return path_graph(n);
    if (kind == "cycle") return cycle_graph(n);
    if (kind == "star") return star_graph(n);
    return complete_graph(n);
  }();
  if (!args.empty()) {
    throw UsageError("graph spec '" + std::string(source) + "': unknown key '" +
                     args.begin()->first + "'");
  }
  return g;
}

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kCompare: return "compare";
    case ExperimentKind::kScan: return "scan";
    case ExperimentKind::kSweep: return "sweep";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (auto kind : {ExperimentKind::kCompare, ExperimentKind::kScan, ExperimentKind::kSweep}) {
    if (name == to_string(kind)) return kind;
  }
  throw UsageError("unknown experiment kind '" + std::string(name) + "'");
}

std::vector<double> parse_value_list(std::string_view text) {
  std::vector<double> out;
  for (auto token : split(text, " \t,")) {
    const auto dots = token.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(number_arg(token, "value list"));
      continue;
    }
    long long lo = 0;
    long long hi = 0;
    if (!parse_number(token.substr(0, dots), lo) || !parse_number(token.substr(dots + 2), hi) ||
        hi < lo || hi - lo > 100000) {
      throw UsageError("bad integer range '" + std::string(token) + "'");
    }
    for (long long v = lo; v <= hi; ++v) out.push_back(static_cast<double>(v));
  }
  return out;
}

std::vector<ParamPoint> expand_grid(const ParamGrid& grid) {
  std::vector<ParamPoint> out;
  for (double a : grid.alpha)
    for (double b : grid.beta)
      for (double d : grid.delta)
        for (double g : grid.gamma)
          for (double t : grid.horizon)
            for (double budget : grid.budget) out.push_back({ScsParams{a, b, d, g, t}, budget});
  return out;
}

void ExperimentSpec::validate() const {
  if (graphs.empty()) throw UsageError("experiment needs at least one graph");
  if (strategies.empty()) throw UsageError("experiment needs at least one strategy");
  if (grids.empty()) throw UsageError("experiment has an empty parameter grid");
  if (restarts < 1) throw UsageError("restarts must be at least 1");
  if (divisions < 1) throw UsageError("divisions must be at least 1");
  for (std::size_t k = 0; k < grids.size(); ++k) {
    const ParamGrid& g = grids[k];
    const std::pair<const char*, const std::vector<double>*> fields[] = {
        {"alpha", &g.alpha}, {"beta", &g.beta},    {"delta", &g.delta},
        {"gamma", &g.gamma}, {"T", &g.horizon}, {"B", &g.budget}};
    for (auto [key, values] : fields) {
      if (values->empty()) {
        throw UsageError("grid " + std::to_string(k + 1) + " has no values for " + key);
      }
      for (double v : *values) {
        if (!(std::isfinite(v) && v > 0.0)) {
          throw UsageError("grid " + std::to_string(k + 1) + ": " + key +
                           " values must be positive");
        }
      }
    }
  }
}

namespace {

std::vector<double>* grid_field(ParamGrid& g, std::string_view key) {
  if (key == "alpha") return &g.alpha;
  if (key == "beta") return &g.beta;
  if (key == "delta") return &g.delta;
  if (key == "gamma") return &g.gamma;
  if (key == "T") return &g.horizon;
  if (key == "B") return &g.budget;
  return nullptr;
}

void inherit(std::vector<double>& field, const std::vector<double>& fallback) {
  if (field.empty()) field = fallback;
}

}  // namespace

ExperimentSpec parse_experiment_spec(std::string_view text) {
  ExperimentSpec spec;
  ParamGrid defaults;
  std::vector<ParamGrid> sections;
  std::vector<std::string> seen;  // keys in the current section
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto fail = [&](const std::string& what) -> UsageError {
    return UsageError("line " + std::to_string(line_no) + ": " + what);
  };

  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    // A '#' starts a comment at the line start or after whitespace.
    for (std::size_t k = 0; k < line.size(); ++k) {
      if (line[k] == '#' && (k == 0 || line[k - 1] == ' ' || line[k - 1] == '\t')) {
        line = line.substr(0, k);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line == "[grid]") {
      sections.emplace_back();
      seen.clear();
      continue;
    }
    if (line.front() == '[') throw fail("unknown section " + std::string(line));

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw fail("expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
      throw fail("duplicate key '" + key + "'");
    }
    seen.push_back(key);

    try {
      ParamGrid& target = sections.empty() ? defaults : sections.back();
      if (auto* field = grid_field(target, key)) {
        *field = parse_value_list(value);
        if (field->empty()) throw UsageError("empty value list");
        continue;
      }
      if (!sections.empty()) throw UsageError("key '" + key + "' is not allowed in [grid]");
      if (key == "name") {
        spec.name = std::string(value);
      } else if (key == "kind") {
        spec.kind = parse_experiment_kind(value);
      } else if (key == "graphs") {
        spec.graphs.clear();
        for (auto g : split(value, " \t")) spec.graphs.emplace_back(g);
      } else if (key == "strategies") {
        spec.strategies.clear();
        for (auto s : split(value, " \t,")) spec.strategies.push_back(parse_strategy_kind(s));
      } else if (key == "restarts") {
        spec.restarts = int_arg(value, key);
      } else if (key == "seed") {
        if (!parse_number(value, spec.seed)) throw UsageError("bad seed");
      } else if (key == "output") {
        spec.output = std::string(value);
      } else if (key == "sweep") {
        if (value != "B" && value != "T") throw UsageError("sweep must be B or T");
        spec.sweep = std::string(value);
      } else if (key == "divisions") {
        spec.divisions = int_arg(value, key);
      } else if (key == "eps_min") {
        spec.hc.eps_min = number_arg(value, key);
      } else if (key == "search_step") {
        spec.hc.search_step = number_arg(value, key);
      } else if (key == "final_step") {
        spec.hc.final_step = number_arg(value, key);
      } else {
        throw UsageError("unknown key '" + key + "'");
      }
    } catch (const UsageError& e) {
      const std::string what = e.what();
      if (what.starts_with("line ")) throw;
      throw fail(what);
    }
  }

  if (sections.empty()) sections.push_back(ParamGrid{});
  for (ParamGrid& g : sections) {
    inherit(g.alpha, defaults.alpha);
    inherit(g.beta, defaults.beta);
    inherit(g.delta, defaults.delta);
    inherit(g.gamma, defaults.gamma);
    inherit(g.horizon, defaults.horizon);
    inherit(g.budget, defaults.budget);
  }
  spec.grids = std::move(sections);
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open experiment spec '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_experiment_spec(buffer.str());
  } catch (const UsageError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void write_file_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path temp = target.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + temp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
      std::error_code ec;
      fs::remove(temp, ec);
      throw Error("failed writing '" + temp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    fs::remove(temp, ec);
    throw Error("cannot move output into place at '" + path + "'");
  }
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

}  // namespace aptrisk
