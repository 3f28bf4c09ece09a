#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bintope/intlinalg.hpp"
#include "bintope/lpkernel.hpp"

namespace bintope::cli {

enum class Command { Snf, Analyze, Degree, Witness, Mspace, Bench };
enum class Format { Json, Csv, Text };

struct RunConfig {
  Command command = Command::Analyze;
  std::string input;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  LpMode mode = LpMode::Float;
  Format format = Format::Json;
  std::string output;        // empty or "-" means standard output
  std::string cells_output;  // degree --emit-cells
  std::vector<Integer> component;
  std::size_t m = 0;
  std::size_t k = 0;
  std::size_t bench_max = 5;
  double budget_seconds = 600.0;
};

enum ExitCode : int {
  kOk = 0,
  kError = 1,
  kInconsistent = 2,
  kDegenerate = 3,
  kInputError = 4,
};

/// --seed when given, else BINTOPE_SEED, else 0. Throws ParseError on a
/// malformed environment value.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag);

/// Parses "k1,k2,..."; the empty string gives an empty tuple.
std::vector<Integer> parse_component(const std::string& text);

/// Runs one command and returns its exit code. Diagnostics go to `err` as
/// a single line.
int run(const RunConfig& config, std::ostream& err);

}  // namespace bintope::cli
