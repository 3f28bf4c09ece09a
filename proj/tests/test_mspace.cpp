#include <algorithm>

#include "bintope/errors.hpp"
#include "bintope/mspace.hpp"
#include "bintope/subdivision.hpp"
#include "doctest.h"

using namespace bintope;

namespace {

Integer degree_of(std::size_t m, std::size_t k) { return degree(generate({m, k})).degree; }

// The term list of W with explicit variables, independent of the map-based
// expansion in the library.
std::vector<std::vector<std::size_t>> raw_terms(const MasterSpaceSpec& s, std::vector<long>& sign) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < s.m; ++i) {
    for (std::size_t j = 0; j < s.k; ++j) {
      out.push_back({s.x(i, j), s.y(i + 1, j), s.z(i + 1, j + 1)});
      sign.push_back(1);
      out.push_back({s.y(i, j), s.x(i, j + 1), s.z(i + 1, j + 1)});
      sign.push_back(-1);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("W_{2,2} has 12 variables and the printed partial in x_{0,0}") {
  MasterSpaceSpec s{2, 2};
  auto names = variable_names(s);
  REQUIRE(names.size() == 12);
  CHECK(names[0] == "x_{0,0}");
  CHECK(names[s.y(1, 0)] == "y_{1,0}");
  CHECK(names[11] == "z_{1,1}");

  auto sys = generate(s);
  CHECK(sys.num_vars() == 12);
  CHECK(sys.num_eqs() == 12);

  // dW/dx_{0,0} = y_{1,0} z_{1,1} - y_{0,1} z_{1,0}
  auto terms = partial_derivative(s, s.x(0, 0));
  REQUIRE(terms.size() == 2);
  std::vector<long> plus(12, 0), minus(12, 0);
  plus[s.y(1, 0)] = plus[s.z(1, 1)] = 1;
  minus[s.y(0, 1)] = minus[s.z(1, 0)] = 1;
  for (const auto& t : terms) CHECK(t.exponents == (t.coefficient > 0 ? plus : minus));
  for (std::size_t i = 0; i < 12; ++i) CHECK(sys.exponents()(i, 0) == plus[i] - minus[i]);
}

TEST_CASE("every column is a difference of two 2-element monomials") {
  for (std::size_t m = 1; m <= 6; ++m) {
    for (std::size_t k = 1; k <= 6; ++k) {
      if (m == 1 && k == 1) continue;
      MasterSpaceSpec s{m, k};
      const std::size_t n = s.num_vars();
      auto sys = generate(s);
      REQUIRE(sys.exact_rhs().has_value());
      std::vector<long> sign;
      auto terms = raw_terms(s, sign);
      for (std::size_t v = 0; v < n; ++v) {
        CHECK((*sys.exact_rhs())[v] == 1);
        // v occurs in exactly two raw terms of opposite sign; the column is
        // the positive cofactor minus the negative one.
        std::vector<long> expected(n, 0);
        std::vector<long> hits;
        for (std::size_t t = 0; t < terms.size(); ++t) {
          auto it = std::find(terms[t].begin(), terms[t].end(), v);
          if (it == terms[t].end()) continue;
          hits.push_back(sign[t]);
          for (auto u : terms[t]) {
            if (u != v) expected[u] += sign[t];
          }
        }
        REQUIRE(hits.size() == 2);
        CHECK(hits[0] + hits[1] == 0);
        std::size_t pos = 0, neg = 0;
        for (std::size_t i = 0; i < n; ++i) {
          const long e = sys.exponents()(i, v).get_si();
          CHECK(e == expected[i]);
          CHECK((e >= -1 && e <= 1));
          pos += e == 1;
          neg += e == -1;
        }
        // Away from the degenerate strips the two monomials are disjoint.
        if (m >= 2 && k >= 2) {
          CHECK(pos == 2);
          CHECK(neg == 2);
        } else {
          CHECK(pos == neg);
          CHECK(pos >= 1);
        }
      }
    }
  }
}

TEST_CASE("(1,1) and empty shapes are rejected") {
  CHECK_THROWS_AS(generate({1, 1}), DomainError);
  CHECK_THROWS_AS(generate({0, 3}), DomainError);
  CHECK_THROWS_AS(partial_derivative({2, 2}, 12), DomainError);
}

TEST_CASE("dimension is mk + 2 with a single component") {
  for (std::size_t m = 1; m <= 8; ++m) {
    for (std::size_t k = 1; k <= 8; ++k) {
      if (m == 1 && k == 1) continue;
      auto st = analyze(generate({m, k}));
      CHECK(st.consistent);
      CHECK(st.dimension == m * k + 2);
      CHECK(st.component_count == 1);
    }
  }
}

TEST_CASE("degree recurrences for m = 1 and m = 2") {
  Integer prev1 = degree_of(1, 2);
  CHECK(prev1 == 2);
  for (std::size_t k = 3; k <= 6; ++k) {
    Integer d = degree_of(1, k);
    CHECK(d == 2 * prev1);
    prev1 = d;
  }
  Integer prev2 = degree_of(2, 1);
  CHECK(prev2 == 2);
  for (std::size_t k = 2; k <= 4; ++k) {
    Integer d = degree_of(2, k);
    Integer pow = 1;
    for (std::size_t i = 0; i < 2 * k - 3; ++i) pow *= 2;
    CHECK(d == 6 * prev2 + pow);
    prev2 = d;
  }
  CHECK(prev2 == 584);
}

TEST_CASE("degree is symmetric in m and k") {
  for (auto [m, k] : {std::pair<std::size_t, std::size_t>{1, 3}, {1, 5}, {2, 3}}) {
    CHECK(degree_of(m, k) == degree_of(k, m));
  }
}

TEST_CASE("benchmark rows and timeouts") {
  BenchOptions opt;
  opt.max_m = 2;
  opt.max_k = 2;
  std::vector<BenchEntry> seen;
  auto rows = benchmark(opt, [&](const BenchEntry& e) { seen.push_back(e); });
  REQUIRE(rows.size() == 3);
  CHECK(seen.size() == 3);
  CHECK(rows[2].degree == 14);
  CHECK(rows[2].dimension == 6);
  CHECK(rows[2].complete);

  opt.budget_seconds = 0.0;
  opt.max_m = 3;
  opt.max_k = 3;
  auto late = benchmark(opt);
  for (const auto& e : late) {
    CHECK(e.dimension == e.m * e.k + 2);
    if (!e.complete) CHECK(e.degree >= 0);
  }
}
