#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "bintope/binomial.hpp"
#include "bintope/lpkernel.hpp"

namespace bintope {

/// Gradient system of the superpotential
///   W_{m,k} = sum_{i<m, j<k} x_{i,j} y_{i+1,j} z_{i+1,j+1} - y_{i,j} x_{i,j+1} z_{i+1,j+1}
/// with the first subscript taken mod m and the second mod k.
/// Variables are ordered x, y, z, each block row-major in (i, j).
struct MasterSpaceSpec {
  std::size_t m = 1;
  std::size_t k = 1;

  std::size_t num_vars() const { return 3 * m * k; }
  std::size_t x(std::size_t i, std::size_t j) const { return (i % m) * k + (j % k); }
  std::size_t y(std::size_t i, std::size_t j) const { return m * k + x(i, j); }
  std::size_t z(std::size_t i, std::size_t j) const { return 2 * m * k + x(i, j); }
};

std::vector<std::string> variable_names(const MasterSpaceSpec& spec);

/// A polynomial term: integer coefficient times a monomial given as exponents.
struct Term {
  long coefficient;
  std::vector<long> exponents;
};

/// Terms of W_{m,k} after combining like terms.
std::vector<Term> superpotential(const MasterSpaceSpec& spec);

/// Terms of dW/dv, combined and sorted by monomial.
std::vector<Term> partial_derivative(const MasterSpaceSpec& spec, std::size_t var);

/// dW/dv = 0 for every variable as x^A = 1 with an exact right-hand side.
/// Throws DomainError for (1,1), whose partials vanish identically, and for
/// m or k equal to zero.
BinomialSystem generate(const MasterSpaceSpec& spec);

struct BenchEntry {
  std::size_t m = 0;
  std::size_t k = 0;
  std::size_t dimension = 0;
  Integer components = 0;
  Integer degree = 0;  // a lower bound when !complete
  bool complete = true;
  double seconds = 0.0;
  std::size_t cells = 0;
  std::size_t lps = 0;
  std::size_t relifts = 0;
  std::size_t exact_fallbacks = 0;
};

struct BenchOptions {
  std::size_t max_m = 5;
  std::size_t max_k = 5;
  double budget_seconds = 600.0;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  LpMode mode = LpMode::Float;
};

/// Runs every (m, k) with m <= max_m, k <= max_k except (1,1), one entry at
/// a time using all threads. `on_entry` is called after each entry.
std::vector<BenchEntry> benchmark(const BenchOptions& options,
                                  const std::function<void(const BenchEntry&)>& on_entry = {});

void write_bench_csv_header(std::ostream& out);
void write_bench_csv_row(std::ostream& out, const BenchEntry& e);

}  // namespace bintope
