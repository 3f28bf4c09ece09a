#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "bintope/intlinalg.hpp"

namespace bintope {

/// Points a in Z^d with integer liftings w(a).
///
/// Duplicate points are merged on construction, keeping the first
/// occurrence. Every lower facet of the lifted hull has an inner normal
/// (alpha, 1); the kernel works with x = (alpha, beta) and the constraints
/// h_a(x) = <a, alpha> + w(a) - beta >= 0, so that vertices of the feasible
/// region are exactly the lower facets.
class LiftedPointSet {
 public:
  using Point = std::vector<long>;

  LiftedPointSet(std::vector<Point> points, std::vector<long> lifting,
                 std::uint64_t seed = 0);

  /// Draws liftings uniformly from [0, 2^20) with a 64-bit Mersenne
  /// Twister seeded by `seed`.
  static LiftedPointSet with_random_lifting(std::vector<Point> points, std::uint64_t seed);

  LiftedPointSet relifted(std::uint64_t seed) const;

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  const Point& point(std::size_t i) const { return points_[i]; }
  const std::vector<Point>& points() const { return points_; }
  long lifting(std::size_t i) const { return lifting_[i]; }
  const std::vector<long>& liftings() const { return lifting_; }
  std::uint64_t seed() const { return seed_; }

  /// Row i is (a_i, -1); together with `offsets` it defines h.
  const IntMatrix& constraint_rows() const { return rows_; }
  /// h_i evaluated exactly at x.
  Rational slack(std::size_t i, const std::vector<Rational>& x) const;

 private:
  std::size_t dim_;
  std::vector<Point> points_;
  std::vector<long> lifting_;
  std::uint64_t seed_;
  IntMatrix rows_;
};

enum class LpMode {
  Exact,          // rational arithmetic throughout
  Float,          // double precision, answers certified exactly, exact rerun on failure
  FloatUnchecked  // double precision only
};

enum class LpStatus {
  Feasible,
  Infeasible,
  ParentInfeasible,  // the fixed node itself is not a lower face
  Degenerate         // more than d+1 lifted points on one lower hyperplane
};

struct LpAnswer {
  LpStatus status = LpStatus::Infeasible;
  /// alpha of the reported vertex.
  std::vector<double> normal;
  /// Sorted indices of the d+1 tight points spanning the reported vertex.
  std::vector<std::size_t> basis;
  /// Value of the objective at the reported optimum (extension only).
  double objective = 0.0;
  bool used_exact = false;
  std::size_t iterations = 0;

  bool feasible() const { return status == LpStatus::Feasible; }
};

/// Minimizes h_candidate subject to h >= 0 and h_i = 0 for i in node.
/// Feasible iff the minimum is 0, i.e. node + candidate lies on a lower
/// facet; the returned basis is such a facet and contains node and
/// candidate. `warm_basis`, when given, must be a lower facet containing
/// node (typically the certificate of the parent).
LpAnswer extend_feasible(const LiftedPointSet& S, const std::vector<std::size_t>& node,
                         std::size_t candidate, LpMode mode = LpMode::Float,
                         const std::vector<std::size_t>* warm_basis = nullptr);

/// Some lower facet of the lifted hull.
LpAnswer any_lower_facet(const LiftedPointSet& S, LpMode mode = LpMode::Float);

/// Moves from the lower facet `cell` across the facet opposite `leave`.
/// Feasible with the neighbouring cell, or Infeasible when that facet lies
/// on the boundary of conv S.
LpAnswer pivot_step(const LiftedPointSet& S, const std::vector<std::size_t>& cell,
                    std::size_t leave, LpMode mode = LpMode::Float);

/// Exact vertex x = (alpha, beta) with h_i(x) = 0 for every i in basis.
/// Throws DomainError if the basis rows are singular.
std::vector<Rational> exact_vertex(const LiftedPointSet& S,
                                   const std::vector<std::size_t>& basis);

}  // namespace bintope
