#include <random>

#include "bintope/errors.hpp"
#include "bintope/lpkernel.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bintope;
using Idx = std::vector<std::size_t>;

namespace {

const oracle::Points kSquare{{0, 0}, {0, 1}, {1, 1}, {1, 0}};

const LpMode kModes[] = {LpMode::Exact, LpMode::Float, LpMode::FloatUnchecked};

// The reported vertex satisfies every constraint, with equality exactly on
// the basis.
void check_certificate(const LiftedPointSet& S, const LpAnswer& a) {
  REQUIRE(a.basis.size() == S.dim() + 1);
  auto x = oracle::lifted_hyperplane(S.points(), S.liftings(), a.basis);
  REQUIRE(x.has_value());
  for (std::size_t i = 0; i < S.size(); ++i) {
    const int s = sgn(oracle::lifted_slack(S.points(), S.liftings(), i, *x));
    if (oracle::is_subset({i}, a.basis)) {
      CHECK(s == 0);
    } else {
      CHECK(s > 0);
    }
  }
  for (std::size_t k = 0; k < S.dim(); ++k) {
    CHECK(a.normal[k] == doctest::Approx((*x)[k].get_d()));
  }
}

}  // namespace

TEST_CASE("lifted point set merges duplicates and validates shape") {
  LiftedPointSet S({{0, 0}, {1, 0}, {0, 0}, {0, 1}}, {5, 6, 7, 8});
  CHECK(S.size() == 3);
  CHECK(S.lifting(0) == 5);
  CHECK(S.lifting(2) == 8);
  CHECK_THROWS_AS(LiftedPointSet({{0, 0}, {1}}, {0, 0}), DimensionError);
  CHECK_THROWS_AS(LiftedPointSet({{0, 0}}, {0, 0}), DimensionError);

  auto a = LiftedPointSet::with_random_lifting(kSquare, 42);
  auto b = LiftedPointSet::with_random_lifting(kSquare, 42);
  CHECK(a.liftings() == b.liftings());
  CHECK(a.seed() == 42);
  for (auto w : a.liftings()) {
    CHECK(w >= 0);
    CHECK(w < (1L << 20));
  }
  CHECK(a.relifted(43).liftings() != a.liftings());
}

TEST_CASE("square: extension examples") {
  for (auto mode : kModes) {
    CAPTURE(static_cast<int>(mode));
    LiftedPointSet S(kSquare, {1, 0, 1, 0});
    // (0,0)-(0,1) is a boundary edge, always a lower face.
    auto a = extend_feasible(S, {0}, 1, mode);
    CHECK(a.feasible());
    check_certificate(S, a);
    CHECK(oracle::is_subset({0, 1}, a.basis));
    // (0,0) and (1,1) are lifted above the plane of the other diagonal.
    auto b = extend_feasible(S, {0}, 2, mode);
    CHECK(b.status == LpStatus::Infeasible);
    CHECK(b.objective > 0.0);
  }
}

TEST_CASE("one-dimensional extension") {
  for (auto mode : kModes) {
    LiftedPointSet S({{0}, {1}, {2}}, {0, 0, 1});
    auto a = extend_feasible(S, {0}, 2, mode);
    CHECK(a.status == LpStatus::Infeasible);
    CHECK(extend_feasible(S, {0}, 1, mode).feasible());
    CHECK(extend_feasible(S, {1}, 2, mode).feasible());
  }
}

TEST_CASE("square: pivot examples") {
  for (auto mode : kModes) {
    LiftedPointSet S(kSquare, {1, 0, 1, 0});
    auto a = pivot_step(S, {0, 1, 3}, 0, mode);
    REQUIRE(a.feasible());
    CHECK(a.basis == Idx{1, 2, 3});
    check_certificate(S, a);
    CHECK(pivot_step(S, {0, 1, 3}, 1, mode).status == LpStatus::Infeasible);
    CHECK(pivot_step(S, {0, 1, 3}, 3, mode).status == LpStatus::Infeasible);
    // Back across the same facet.
    auto b = pivot_step(S, a.basis, 2, mode);
    REQUIRE(b.feasible());
    CHECK(b.basis == Idx{0, 1, 3});
  }
}

TEST_CASE("coplanar lifting is reported degenerate") {
  LiftedPointSet S(kSquare, {1, 0, 0, 1});
  for (auto mode : {LpMode::Exact, LpMode::Float}) {
    CHECK(pivot_step(S, {0, 1, 3}, 0, mode).status == LpStatus::Degenerate);
    CHECK(any_lower_facet(S, mode).status == LpStatus::Degenerate);
  }
}

TEST_CASE("one-dimensional pivot leaves the hull") {
  LiftedPointSet S({{0}, {1}, {2}}, {0, 1, 0});
  for (auto mode : kModes) {
    CHECK(pivot_step(S, {0, 2}, 0, mode).status == LpStatus::Infeasible);
    CHECK(pivot_step(S, {0, 2}, 2, mode).status == LpStatus::Infeasible);
  }
}

TEST_CASE("parent infeasible and dependent nodes") {
  LiftedPointSet S(kSquare, {1, 0, 1, 0});
  for (auto mode : {LpMode::Exact, LpMode::Float}) {
    CHECK(extend_feasible(S, {0, 2}, 1, mode).status == LpStatus::ParentInfeasible);
  }
  // Three collinear points as a node.
  const oracle::Points pts{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  LiftedPointSet bent(pts, {0, 5, 0, 3, 3});
  CHECK(extend_feasible(bent, {0, 1, 2}, 3, LpMode::Exact).status ==
        LpStatus::ParentInfeasible);
  LiftedPointSet straight(pts, {0, 0, 0, 3, 3});
  CHECK(extend_feasible(straight, {0, 1, 2}, 3, LpMode::Exact).status ==
        LpStatus::Degenerate);
}

TEST_CASE("argument validation") {
  LiftedPointSet S(kSquare, {1, 0, 1, 0});
  CHECK_THROWS_AS(extend_feasible(S, {0}, 0), DomainError);
  CHECK_THROWS_AS(extend_feasible(S, {0}, 9), DomainError);
  CHECK_THROWS_AS(extend_feasible(S, {0, 0}, 1), DomainError);
  CHECK_THROWS_AS(pivot_step(S, {0, 1}, 0), DimensionError);
  CHECK_THROWS_AS(pivot_step(S, {0, 1, 3}, 2), DomainError);
  const Idx bad{1, 2, 3};
  CHECK_THROWS_AS(extend_feasible(S, {0}, 1, LpMode::Float, &bad), DomainError);
  LiftedPointSet flat({{0, 0}, {1, 0}, {2, 0}}, {0, 1, 5});
  CHECK_THROWS_AS(any_lower_facet(flat), DimensionError);
}

TEST_CASE("property: extension agrees with brute-force lower faces") {
  std::mt19937_64 rng(101);
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t d = 1 + rng() % 4;
    std::size_t n = d + 1 + rng() % (12 - d);
    auto pts = oracle::random_points(rng, d, n, -5, 5);
    n = pts.size();
    auto lift = oracle::random_lifting(rng, n, 1000);
    auto bc = oracle::brute_force_cells(pts, lift);
    if (bc.degenerate) continue;
    LiftedPointSet S(pts, lift);
    for (int q = 0; q < 10; ++q) {
      // Half the nodes are faces of a true cell, so feasible answers are common.
      Idx node;
      const std::size_t k = 1 + rng() % d;
      if (q % 2 == 0) {
        Idx cell = bc.cells[rng() % bc.cells.size()];
        std::shuffle(cell.begin(), cell.end(), rng);
        node.assign(cell.begin(), cell.begin() + k);
      } else {
        while (node.size() < k) {
          std::size_t v = rng() % n;
          if (!oracle::is_subset({v}, node)) node.push_back(v);
        }
      }
      std::size_t c = rng() % n;
      while (oracle::is_subset({c}, node)) c = rng() % n;

      Idx with = node;
      with.push_back(c);
      for (auto mode : {LpMode::Exact, LpMode::Float}) {
        auto a = extend_feasible(S, node, c, mode);
        if (!oracle::is_lower_face(bc, node)) {
          CHECK(a.status == LpStatus::ParentInfeasible);
          continue;
        }
        CHECK(a.feasible() == oracle::is_lower_face(bc, with));
        CHECK(a.objective >= 0.0);
        if (a.feasible()) {
          check_certificate(S, a);
          CHECK(oracle::is_subset(with, a.basis));
        }
        ++checked;
      }
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("property: warm start from the parent certificate") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t d = 1 + rng() % 4;
    std::size_t n = d + 1 + rng() % (12 - d);
    auto pts = oracle::random_points(rng, d, n, -5, 5);
    n = pts.size();
    auto lift = oracle::random_lifting(rng, n, 1000);
    auto bc = oracle::brute_force_cells(pts, lift);
    if (bc.degenerate) continue;
    LiftedPointSet S(pts, lift);
    auto root = any_lower_facet(S, LpMode::Exact);
    REQUIRE(root.feasible());
    check_certificate(S, root);
    for (std::size_t c = 0; c < n; ++c) {
      auto a = extend_feasible(S, {}, c, LpMode::Float, &root.basis);
      CHECK(a.feasible() == oracle::is_lower_face(bc, {c}));
      if (!a.feasible()) continue;
      for (std::size_t c2 = 0; c2 < n; ++c2) {
        if (c2 == c) continue;
        auto b = extend_feasible(S, {c}, c2, LpMode::Float, &a.basis);
        CHECK(b.feasible() == oracle::is_lower_face(bc, {c, c2}));
      }
    }
  }
}

TEST_CASE("property: pivoting walks the brute-force cells and is an involution") {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t d = 1 + rng() % 4;
    std::size_t n = d + 1 + rng() % (12 - d);
    auto pts = oracle::random_points(rng, d, n, -5, 5);
    n = pts.size();
    auto lift = oracle::random_lifting(rng, n, 1000);
    auto bc = oracle::brute_force_cells(pts, lift);
    if (bc.degenerate) continue;
    LiftedPointSet S(pts, lift);
    for (const auto& cell : bc.cells) {
      for (auto leave : cell) {
        auto a = pivot_step(S, cell, leave, LpMode::Float);
        // A facet is interior iff another brute-force cell contains it.
        Idx facet;
        for (auto v : cell) {
          if (v != leave) facet.push_back(v);
        }
        std::size_t sharing = 0;
        for (const auto& other : bc.cells) sharing += oracle::is_subset(facet, other) ? 1 : 0;
        CHECK(a.feasible() == (sharing == 2));
        if (!a.feasible()) continue;
        check_certificate(S, a);
        std::size_t entered = 0;
        for (auto v : a.basis) {
          if (!oracle::is_subset({v}, cell)) entered = v;
        }
        auto back = pivot_step(S, a.basis, entered, LpMode::Float);
        REQUIRE(back.feasible());
        CHECK(back.basis == cell);
      }
    }
  }
}

TEST_CASE("property: exact and float agree on feasibility") {
  std::mt19937_64 rng(404);
  int samples = 0;
  while (samples < 600) {
    const std::size_t d = 1 + rng() % 4;
    std::size_t n = d + 1 + rng() % (12 - d);
    auto pts = oracle::random_points(rng, d, n, -5, 5);
    n = pts.size();
    LiftedPointSet S(pts, oracle::random_lifting(rng, n, 1000));
    for (int q = 0; q < 5; ++q, ++samples) {
      Idx node;
      const std::size_t k = rng() % (d + 1);
      while (node.size() < k) {
        std::size_t v = rng() % n;
        if (!oracle::is_subset({v}, node)) node.push_back(v);
      }
      std::size_t c = rng() % n;
      while (oracle::is_subset({c}, node)) c = rng() % n;
      auto exact = extend_feasible(S, node, c, LpMode::Exact);
      auto fast = extend_feasible(S, node, c, LpMode::FloatUnchecked);
      auto checked = extend_feasible(S, node, c, LpMode::Float);
      CHECK(exact.status == fast.status);
      CHECK(exact.status == checked.status);
    }
  }
}
