#include "bintope/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bintope/errors.hpp"
#include "bintope/homotopy.hpp"
#include "bintope/io.hpp"
#include "bintope/mspace.hpp"
#include "bintope/subdivision.hpp"

namespace bintope::cli {

namespace {

using io::Json;

const char* mode_name(LpMode mode) {
  switch (mode) {
    case LpMode::Exact: return "exact";
    case LpMode::Float: return "float";
    case LpMode::FloatUnchecked: return "float-unchecked";
  }
  return "float";
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json header(const char* command, const RunConfig& config) {
  Json out;
  out["command"] = command;
  out["seed"] = config.seed;
  return out;
}

int run_snf(const RunConfig& config) {
  const IntMatrix A = io::read_matrix_file(config.input);
  SnfOptions opt;
  opt.enforce_divisibility = true;
  opt.workers = config.threads;
  const SnfResult snf = smith_normal_form(A, opt);
  if (config.format == Format::Text) {
    std::ostringstream out;
    out << "rank " << snf.rank << "\ndivisors";
    for (const auto& d : snf.divisors) out << ' ' << d;
    out << '\n';
    io::write_output(config.output, out.str());
    return kOk;
  }
  Json out = header("snf", config);
  out.update(io::snf_to_json(snf));
  io::write_output(config.output, dump(out));
  return kOk;
}

int run_analyze(const RunConfig& config, std::ostream& err) {
  const BinomialSystem sys = io::read_system_file(config.input);
  AnalyzeOptions opt;
  opt.workers = config.threads;
  const SolutionStructure st = analyze(sys, opt);
  if (config.format == Format::Text) {
    std::ostringstream out;
    out << "consistent " << (st.consistent ? "yes" : "no") << "\nrank " << st.rank
        << "\ndimension " << st.dimension << "\ncomponents " << st.component_count << '\n';
    io::write_output(config.output, out.str());
  } else {
    Json out = header("analyze", config);
    out.update(io::structure_to_json(st));
    io::write_output(config.output, dump(out));
  }
  if (!st.consistent) {
    err << "error: analyze: the system has no solution in the torus\n";
    return kInconsistent;
  }
  return kOk;
}

int run_degree(const RunConfig& config) {
  const BinomialSystem sys = io::read_system_file(config.input);
  DegreeOptions opt;
  opt.lifting_seed = config.seed;
  opt.subdivide.workers = config.threads;
  opt.subdivide.mode = config.mode;
  opt.subdivide.seed = config.seed;
  opt.analyze.workers = config.threads;
  const DegreeResult r = degree(sys, opt);

  Json out = header("degree", config);
  out["mode"] = mode_name(config.mode);
  out["dimension"] = r.structure.dimension;
  out["components"] = io::to_json(r.structure.component_count);
  out["degree"] = io::to_json(r.degree);
  if (r.subdivision) {
    const Subdivision& sub = *r.subdivision;
    out["lifting_seed"] = sub.lifting_seed;
    out["complete"] = sub.complete;
    out["cells"] = sub.cells.size();
    Json stats;
    stats["lps"] = sub.stats.lps;
    stats["extension_lps"] = sub.stats.extension_lps;
    stats["pivots"] = sub.stats.pivots;
    stats["nodes_explored"] = sub.stats.nodes_explored;
    stats["pruned"] = sub.stats.pruned;
    stats["relifts"] = sub.stats.relifts;
    stats["rounds"] = sub.stats.rounds;
    stats["exact_fallbacks"] = sub.stats.exact_fallbacks;
    out["stats"] = std::move(stats);
  } else {
    out["complete"] = true;
    out["cells"] = 0;
  }
  if (!config.cells_output.empty()) {
    Json cells = header("degree", config);
    cells.erase("command");
    cells["lifting_seed"] = r.subdivision ? r.subdivision->lifting_seed : config.seed;
    cells["cells"] = r.subdivision ? io::cells_to_json(*r.subdivision) : Json::array();
    io::write_output(config.cells_output, dump(cells));
  }
  if (config.format == Format::Text) {
    std::ostringstream text;
    text << r.degree << '\n';
    io::write_output(config.output, text.str());
  } else {
    io::write_output(config.output, dump(out));
  }
  return kOk;
}

int run_witness(const RunConfig& config) {
  const BinomialSystem sys = io::read_system_file(config.input);
  WitnessOptions opt;
  opt.seed = config.seed;
  opt.lifting_seed = config.seed;
  opt.workers = config.threads;
  opt.mode = config.mode;
  const WitnessSet w = witness_set(sys, config.component, opt);
  Json out = header("witness", config);
  Json component = Json::array();
  for (const auto& k : config.component) component.push_back(io::to_json(k));
  out["component"] = std::move(component);
  out.update(io::witness_to_json(w));
  io::write_output(config.output, dump(out));
  return kOk;
}

int run_mspace(const RunConfig& config) {
  const MasterSpaceSpec spec{config.m, config.k};
  const BinomialSystem sys = generate(spec);
  Json out = header("mspace", config);
  out["m"] = spec.m;
  out["k"] = spec.k;
  out["variables"] = variable_names(spec);
  out.update(io::system_to_json(sys));
  io::write_output(config.output, dump(out));
  return kOk;
}

int run_bench(const RunConfig& config, std::ostream& err) {
  BenchOptions opt;
  opt.max_m = config.bench_max;
  opt.max_k = config.bench_max;
  opt.budget_seconds = config.budget_seconds;
  opt.threads = config.threads;
  opt.seed = config.seed;
  opt.mode = config.mode;

  std::ofstream file;
  const bool to_stdout = config.output.empty() || config.output == "-";
  if (!to_stdout) {
    file.open(config.output);
    if (!file) throw ParseError("cannot write " + config.output);
  }
  std::ostream& out = to_stdout ? std::cout : file;
  out << "seed,";
  write_bench_csv_header(out);
  benchmark(opt, [&](const BenchEntry& e) {
    out << config.seed << ',';
    write_bench_csv_row(out, e);
    out.flush();
    err << "bench: m=" << e.m << " k=" << e.k << " degree " << (e.complete ? "" : ">=")
        << e.degree << '\n';
  });
  return kOk;
}

}  // namespace

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
  if (flag) return *flag;
  const char* env = std::getenv("BINTOPE_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used, 0);
    if (used != std::string(env).size()) throw std::invalid_argument(env);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("BINTOPE_SEED is not an unsigned integer: ") + env);
  }
}

std::vector<Integer> parse_component(const std::string& text) {
  std::vector<Integer> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    Integer v;
    if (part.empty() || v.set_str(part, 10) != 0) throw ParseError("bad component index: " + text);
    out.push_back(v);
  }
  return out;
}

int run(const RunConfig& config, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::Snf: return run_snf(config);
      case Command::Analyze: return run_analyze(config, err);
      case Command::Degree: return run_degree(config);
      case Command::Witness: return run_witness(config);
      case Command::Mspace: return run_mspace(config);
      case Command::Bench: return run_bench(config, err);
    }
    return kError;
  } catch (const InconsistentSystemError& e) {
    err << "error: " << e.what() << '\n';
    return kInconsistent;
  } catch (const DegeneracyError& e) {
    err << "error: " << e.what() << '\n';
    return kDegenerate;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
}

}  // namespace bintope::cli
