#include <random>
#include <set>
#include <thread>

#include "bintope/errors.hpp"
#include "bintope/subdivision.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bintope;

namespace {

std::vector<Node> indices_of(const Subdivision& sub) {
  std::vector<Node> out;
  for (const auto& c : sub.cells) out.push_back(c.indices);
  return out;
}

void check_cells_exactly(const Subdivision& sub) {
  const auto& S = sub.lifted;
  auto bc = oracle::brute_force_cells(S.points(), S.liftings());
  CHECK_FALSE(bc.degenerate);
  std::set<Node> expected(bc.cells.begin(), bc.cells.end());
  std::set<Node> got;
  for (const auto& c : sub.cells) {
    got.insert(c.indices);
    auto x = oracle::lifted_hyperplane(S.points(), S.liftings(), c.indices);
    REQUIRE(x.has_value());
    for (std::size_t k = 0; k < S.dim(); ++k) CHECK(c.normal[k] == (*x)[k]);
    CHECK(c.nvol >= 1);
  }
  CHECK(got.size() == sub.cells.size());
  CHECK(got == expected);
}

struct Instance {
  oracle::Points pts;
  std::vector<long> lift;
};

std::vector<Instance> random_corpus(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<Instance> out;
  for (int i = 0; i < count; ++i) {
    const std::size_t d = 1 + rng() % 4;
    const std::size_t n = d + 1 + rng() % (12 - d);
    auto pts = oracle::random_points(rng, d, n, -4, 4);
    auto lift = oracle::random_lifting(rng, pts.size(), (1L << 20) - 1);
    out.push_back({pts, lift});
  }
  return out;
}

}  // namespace

TEST_CASE("canonical nodes and dedup_insert") {
  NodeStore store;
  CHECK(dedup_insert(store, {1, 2}));
  CHECK_FALSE(dedup_insert(store, {2, 1}));
  CHECK(dedup_insert(store, {7}));
  CHECK(store.size() == 2);
  CHECK(canonical({3, 1, 3, 2}) == Node{1, 2, 3});
  NodeStore empty;
  CHECK(dedup_insert(empty, {0, 5, 9}));
}

TEST_CASE("dedup_insert from 8 threads matches a sequential replay") {
  constexpr std::size_t kNodes = 1000000;
  std::mt19937_64 rng(55);
  std::vector<Node> nodes(kNodes);
  for (auto& node : nodes) {
    const std::size_t k = 1 + rng() % 3;
    for (std::size_t i = 0; i < k; ++i) node.push_back(rng() % 60);
  }
  std::set<Node> distinct;
  for (const auto& node : nodes) distinct.insert(canonical(node));

  NodeStore store;
  std::atomic<std::size_t> fresh{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < 8; ++t) {
    pool.emplace_back([&, t] {
      std::size_t mine = 0;
      for (std::size_t i = t; i < kNodes; i += 8) mine += dedup_insert(store, nodes[i]) ? 1 : 0;
      fresh += mine;
    });
  }
  for (auto& th : pool) th.join();
  CHECK(fresh.load() == distinct.size());
  CHECK(store.size() == distinct.size());
}

TEST_CASE("unit square and unit simplex") {
  for (bool pivoting : {true, false}) {
    LiftedPointSet square({{0, 0}, {0, 1}, {1, 1}, {1, 0}}, {1, 0, 1, 0});
    SubdivideOptions opt;
    opt.pivoting = pivoting;
    auto sub = subdivide(square, opt);
    CHECK(sub.cells.size() == 2);
    CHECK(sub.total_volume == 2);
    CHECK(indices_of(sub) == std::vector<Node>{{0, 1, 3}, {1, 2, 3}});
    check_cells_exactly(sub);

    LiftedPointSet simplex({{0, 0}, {1, 0}, {0, 1}}, {3, 1, 4});
    auto one = subdivide(simplex, opt);
    CHECK(one.cells.size() == 1);
    CHECK(one.total_volume == 1);
  }
}

TEST_CASE("degenerate lifting is re-lifted") {
  LiftedPointSet square({{0, 0}, {0, 1}, {1, 1}, {1, 0}}, {1, 0, 0, 1}, 9);
  auto sub = subdivide(square);
  CHECK(sub.stats.relifts >= 1);
  CHECK(sub.lifting_seed == relift_seed(9, 0));
  CHECK(sub.total_volume == 2);
  check_cells_exactly(sub);

  SubdivideOptions none;
  none.max_relifts = 0;
  CHECK_THROWS_AS(subdivide(square, none), DegeneracyError);
}

TEST_CASE("lower-dimensional point sets are rejected") {
  LiftedPointSet line({{0, 0}, {1, 1}, {2, 2}}, {0, 1, 5});
  CHECK_THROWS_AS(subdivide(line), DimensionError);
  LiftedPointSet few({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {0, 1, 2});
  CHECK_THROWS_AS(subdivide(few), DimensionError);
}

TEST_CASE("property: random sets match the volume oracle and brute-force cells") {
  for (const auto& inst : random_corpus(606, 120)) {
    LiftedPointSet S(inst.pts, inst.lift, 17);
    for (auto mode : {LpMode::Float, LpMode::Exact}) {
      SubdivideOptions opt;
      opt.mode = mode;
      auto sub = subdivide(S, opt);
      CHECK(sub.complete);
      CHECK(sub.total_volume == oracle::normalized_volume(inst.pts));
      check_cells_exactly(sub);
    }
  }
}

TEST_CASE("property: worker count and pivoting do not change the cells") {
  for (const auto& inst : random_corpus(707, 40)) {
    LiftedPointSet S(inst.pts, inst.lift, 3);
    SubdivideOptions base;
    const auto reference = indices_of(subdivide(S, base));
    for (unsigned workers : {2u, 8u}) {
      for (bool pivoting : {true, false}) {
        SubdivideOptions opt;
        opt.workers = workers;
        opt.pivoting = pivoting;
        CHECK(indices_of(subdivide(S, opt)) == reference);
      }
    }
  }
}

TEST_CASE("property: no superset of an infeasible node is feasible") {
  for (const auto& inst : random_corpus(808, 40)) {
    if (inst.pts.size() > 10) continue;
    LiftedPointSet S(inst.pts, inst.lift);
    ExtensionTrace trace;
    SubdivideOptions opt;
    opt.pivoting = false;
    opt.trace = &trace;
    auto sub = subdivide(S, opt);
    std::vector<Node> feasible = trace.feasible;
    for (const auto& c : sub.cells) feasible.push_back(c.indices);
    for (const auto& bad : trace.infeasible) {
      for (const auto& good : feasible) CHECK_FALSE(oracle::is_subset(bad, good));
    }
    // Extension alone visits every lower face.
    auto bc = oracle::brute_force_cells(S.points(), S.liftings());
    std::set<Node> faces;
    for (const auto& cell : bc.cells) {
      for (std::size_t k = 1; k <= cell.size(); ++k) {
        oracle::for_each_subset(cell.size(), k, [&](const std::vector<std::size_t>& pick) {
          Node f;
          for (auto p : pick) f.push_back(cell[p]);
          faces.insert(f);
        });
      }
    }
    std::set<Node> seen(trace.feasible.begin(), trace.feasible.end());
    CHECK(seen == faces);
  }
}

TEST_CASE("property: translation invariance") {
  std::mt19937_64 rng(909);
  for (const auto& inst : random_corpus(910, 30)) {
    auto moved = inst.pts;
    std::vector<long> shift(inst.pts[0].size());
    for (auto& v : shift) v = static_cast<long>(rng() % 21) - 10;
    for (auto& p : moved)
      for (std::size_t k = 0; k < p.size(); ++k) p[k] += shift[k];
    auto a = subdivide(LiftedPointSet(inst.pts, inst.lift, 1));
    auto b = subdivide(LiftedPointSet(moved, inst.lift, 1));
    CHECK(indices_of(a) == indices_of(b));
    CHECK(a.total_volume == b.total_volume);
  }
}

TEST_CASE("deadline yields a partial lower bound") {
  std::mt19937_64 rng(1);
  auto pts = oracle::random_points(rng, 4, 12, -4, 4);
  SubdivideOptions opt;
  opt.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  auto sub = subdivide(LiftedPointSet::with_random_lifting(pts, 5), opt);
  CHECK_FALSE(sub.complete);
  CHECK(sub.total_volume <= oracle::normalized_volume(pts));
}

TEST_CASE("degree of small binomial systems") {
  // Points have degree 1 each.
  auto pts = degree(BinomialSystem(IntMatrix{{1, 0}, {0, 1}}, ComplexVector{1.0, 1.0}));
  CHECK(pts.structure.dimension == 0);
  CHECK(pts.degree == 1);
  CHECK(pts.structure.component_count == 1);
  CHECK_FALSE(pts.subdivision.has_value());

  // y = x^2 in the torus: the parabola, degree 2.
  auto parabola = degree(BinomialSystem(IntMatrix{{2}, {-1}}, ComplexVector{1.0}));
  CHECK(parabola.structure.dimension == 1);
  CHECK(parabola.degree == 2);

  // x = y, a line.
  auto line = degree(BinomialSystem(IntMatrix{{1}, {-1}}, ComplexVector{3.0}));
  CHECK(line.degree == 1);

  // x^2 y^2 z^-1 = 1: a surface of degree 4 in (C*)^3.
  auto surface = degree(BinomialSystem(IntMatrix{{2}, {2}, {-1}}, ComplexVector{1.0}));
  CHECK(surface.structure.dimension == 2);
  CHECK(surface.degree == 4);

  CHECK_THROWS_AS(degree(BinomialSystem(IntMatrix{{1, 1}}, ComplexVector{1.0, 2.0})),
                  InconsistentSystemError);
}
