#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "bintope/cli.hpp"
#include "bintope/errors.hpp"
#include "bintope/parallel.hpp"

using namespace bintope;
using namespace bintope::cli;

namespace {

struct Flags {
  std::string input;
  std::optional<std::uint64_t> seed;
  unsigned threads = default_workers();
  std::string mode = "float";
  std::string format = "json";
  std::string output;
  std::string cells;
  std::string component;
  std::size_t m = 0, k = 0;
  std::size_t max = 5;
  double budget = 600.0;
};

void add_common(CLI::App* cmd, Flags& f, bool input) {
  if (input) cmd->add_option("input", f.input, "input file")->required();
  cmd->add_option("--seed", f.seed, "64-bit seed (default: BINTOPE_SEED or 0)");
  cmd->add_option("--threads", f.threads, "worker threads");
  cmd->add_option("--out,-o", f.output, "output path (default: stdout)");
}

void add_mode(CLI::App* cmd, Flags& f) {
  cmd->add_option("--mode", f.mode, "LP arithmetic")
      ->check(CLI::IsMember({"exact", "float"}));
}

void add_format(CLI::App* cmd, Flags& f) {
  cmd->add_option("--format", f.format, "output format")->check(CLI::IsMember({"json", "text"}));
}

void add_bench(CLI::App* cmd, Flags& f) {
  cmd->add_option("--seed", f.seed, "64-bit seed (default: BINTOPE_SEED or 0)");
  cmd->add_option("--threads", f.threads, "worker threads");
  cmd->add_option("--max", f.max, "largest m and k");
  cmd->add_option("--budget", f.budget, "wall-clock seconds per entry");
  cmd->add_option("--csv,--out,-o", f.output, "CSV path (default: stdout)");
  add_mode(cmd, f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Binomial system toolkit: structure, degree and witness sets"};
  app.require_subcommand(1);
  Flags f;

  auto* snf = app.add_subcommand("snf", "Smith normal form of an integer matrix");
  add_common(snf, f, true);
  add_format(snf, f);

  auto* an = app.add_subcommand("analyze", "dimension, components and parametrization");
  add_common(an, f, true);
  add_format(an, f);

  auto* deg = app.add_subcommand("degree", "degree of the solution components");
  add_common(deg, f, true);
  add_mode(deg, f);
  add_format(deg, f);
  deg->add_option("--emit-cells", f.cells, "write the subdivision cells as JSON");

  auto* wit = app.add_subcommand("witness", "witness set of one component");
  add_common(wit, f, true);
  add_mode(wit, f);
  wit->add_option("--component", f.component, "torsion indices k1,k2,... (default all zero)");

  auto* ms = app.add_subcommand("mspace", "master-space gradient systems");
  ms->add_option("--m", f.m, "first period");
  ms->add_option("--k", f.k, "second period");
  ms->add_option("--seed", f.seed, "64-bit seed recorded in the output");
  ms->add_option("--emit,--out,-o", f.output, "system JSON path (default: stdout)");
  auto* ms_bench = ms->add_subcommand("bench", "benchmark table over m, k");
  add_bench(ms_bench, f);

  auto* bench = app.add_subcommand("bench", "benchmark table over m, k");
  add_bench(bench, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  RunConfig config;
  try {
    config.seed = resolve_seed(f.seed);
    config.component = parse_component(f.component);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  config.input = f.input;
  config.threads = std::max(1u, f.threads);
  config.mode = f.mode == "exact" ? LpMode::Exact : LpMode::Float;
  config.format = f.format == "text" ? Format::Text : Format::Json;
  config.output = f.output;
  config.cells_output = f.cells;
  config.m = f.m;
  config.k = f.k;
  config.bench_max = f.max;
  config.budget_seconds = f.budget;

  if (*snf) {
    config.command = Command::Snf;
  } else if (*an) {
    config.command = Command::Analyze;
  } else if (*deg) {
    config.command = Command::Degree;
  } else if (*wit) {
    config.command = Command::Witness;
  } else if (*bench || *ms_bench) {
    config.command = Command::Bench;
  } else {
    if (f.m == 0 || f.k == 0) {
      std::cerr << "error: mspace needs --m and --k\n";
      return kInputError;
    }
    config.command = Command::Mspace;
  }
  return run(config, std::cerr);
}
