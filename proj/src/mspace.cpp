#include "bintope/mspace.hpp"

#include <chrono>
#include <map>
#include <ostream>

#include "bintope/errors.hpp"
#include "bintope/subdivision.hpp"

namespace bintope {

namespace {

using Monomial = std::vector<long>;

std::vector<Term> collect(const std::map<Monomial, long>& terms) {
  std::vector<Term> out;
  for (const auto& [mono, c] : terms) {
    if (c != 0) out.push_back({c, mono});
  }
  return out;
}

void check_spec(const MasterSpaceSpec& spec) {
  if (spec.m == 0 || spec.k == 0) throw DomainError("mspace: m and k must be positive");
}

}  // namespace

std::vector<std::string> variable_names(const MasterSpaceSpec& spec) {
  std::vector<std::string> names(spec.num_vars());
  for (std::size_t i = 0; i < spec.m; ++i) {
    for (std::size_t j = 0; j < spec.k; ++j) {
      const std::string sub = "_{" + std::to_string(i) + "," + std::to_string(j) + "}";
      names[spec.x(i, j)] = "x" + sub;
      names[spec.y(i, j)] = "y" + sub;
      names[spec.z(i, j)] = "z" + sub;
    }
  }
  return names;
}

std::vector<Term> superpotential(const MasterSpaceSpec& spec) {
  check_spec(spec);
  std::map<Monomial, long> terms;
  auto add = [&](long c, std::initializer_list<std::size_t> vars) {
    Monomial mono(spec.num_vars(), 0);
    for (auto v : vars) ++mono[v];
    terms[mono] += c;
  };
  for (std::size_t i = 0; i < spec.m; ++i) {
    for (std::size_t j = 0; j < spec.k; ++j) {
      add(1, {spec.x(i, j), spec.y(i + 1, j), spec.z(i + 1, j + 1)});
      add(-1, {spec.y(i, j), spec.x(i, j + 1), spec.z(i + 1, j + 1)});
    }
  }
  return collect(terms);
}

std::vector<Term> partial_derivative(const MasterSpaceSpec& spec, std::size_t var) {
  if (var >= spec.num_vars()) throw DomainError("mspace: variable index out of range");
  std::map<Monomial, long> terms;
  for (const auto& t : superpotential(spec)) {
    if (t.exponents[var] == 0) continue;
    Monomial mono = t.exponents;
    const long e = mono[var]--;
    terms[mono] += t.coefficient * e;
  }
  return collect(terms);
}

BinomialSystem generate(const MasterSpaceSpec& spec) {
  check_spec(spec);
  const std::size_t n = spec.num_vars();
  IntMatrix A(n, n);
  std::vector<Rational> rhs(n);
  for (std::size_t v = 0; v < n; ++v) {
    const std::vector<Term> terms = partial_derivative(spec, v);
    if (terms.size() != 2) {
      throw DomainError("mspace: partial derivative of W_{" + std::to_string(spec.m) + "," +
                        std::to_string(spec.k) + "} is not a binomial");
    }
    // c1 x^alpha + c2 x^beta = 0 with the positive term first.
    const std::size_t first = terms[0].coefficient > 0 ? 0 : 1;
    const Term& t1 = terms[first];
    const Term& t2 = terms[1 - first];
    for (std::size_t i = 0; i < n; ++i) A(i, v) = t1.exponents[i] - t2.exponents[i];
    rhs[v] = Rational(-t2.coefficient, t1.coefficient);
    rhs[v].canonicalize();
  }
  return BinomialSystem(std::move(A), std::move(rhs));
}

std::vector<BenchEntry> benchmark(const BenchOptions& options,
                                  const std::function<void(const BenchEntry&)>& on_entry) {
  std::vector<BenchEntry> out;
  for (std::size_t m = 1; m <= options.max_m; ++m) {
    for (std::size_t k = 1; k <= options.max_k; ++k) {
      if (m == 1 && k == 1) continue;
      const auto start = std::chrono::steady_clock::now();
      BenchEntry e;
      e.m = m;
      e.k = k;
      DegreeOptions opt;
      opt.lifting_seed = options.seed;
      opt.subdivide.workers = options.threads;
      opt.subdivide.mode = options.mode;
      opt.subdivide.seed = options.seed;
      opt.subdivide.deadline =
          start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(options.budget_seconds));
      opt.analyze.workers = options.threads;
      DegreeResult r = degree(generate({m, k}), opt);
      e.dimension = r.structure.dimension;
      e.components = r.structure.component_count;
      e.degree = r.degree;
      if (r.subdivision) {
        e.complete = r.subdivision->complete;
        e.cells = r.subdivision->cells.size();
        e.lps = r.subdivision->stats.lps;
        e.relifts = r.subdivision->stats.relifts;
        e.exact_fallbacks = r.subdivision->stats.exact_fallbacks;
      }
      e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      out.push_back(e);
      if (on_entry) on_entry(e);
    }
  }
  return out;
}

void write_bench_csv_header(std::ostream& out) {
  out << "m,k,dim,components,degree,complete,seconds,cells,lps,relifts,exact_fallbacks\n";
}

void write_bench_csv_row(std::ostream& out, const BenchEntry& e) {
  out << e.m << ',' << e.k << ',' << e.dimension << ',' << e.components << ','
      << (e.complete ? "" : ">=") << e.degree << ',' << (e.complete ? 1 : 0) << ','
      << e.seconds << ',' << e.cells << ',' << e.lps << ',' << e.relifts << ','
      << e.exact_fallbacks << '\n';
}

}  // namespace bintope
