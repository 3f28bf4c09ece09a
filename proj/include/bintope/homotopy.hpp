#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "bintope/binomial.hpp"
#include "bintope/lpkernel.hpp"
#include "bintope/subdivision.hpp"

namespace bintope {

/// The cut of one component by d random hyperplanes
///   sum_j c_ij x_j = c_i0,   i < d,
/// rewritten in the parameters t of the component as
///   sum_{a in S} c_{i,a} t^a = 0
/// over the distinct points S of the columns of P_0 and the origin.
struct WitnessProblem {
  ComponentParametrization component;
  /// d x (n+1), column 0 holds c_i0. Entries lie on the unit circle.
  Eigen::MatrixXcd cut;
  /// Distinct support points with the lifting used for the subdivision.
  LiftedPointSet support;
  /// d x |S|, the coefficient c_{i,a} of t^a after absorbing the torsion
  /// point into c_ij and merging equal columns.
  Eigen::MatrixXcd coefficients;
  std::uint64_t coefficient_seed = 0;

  std::size_t dim() const { return support.dim(); }
};

/// Draws the cut from `coefficient_seed` and lifts the support with
/// `lifting_seed`.
WitnessProblem make_problem(const ComponentParametrization& component,
                            std::uint64_t coefficient_seed, std::uint64_t lifting_seed);

/// H(y, u) = sum_a c_{i,a} y^a u^{E_a} for one cell, where t = y s^alpha,
/// s = u^M and E_a = M (<a - a_0, alpha> + w(a) - w(a_0)).
struct HomotopyDescriptor {
  Node cell;
  std::vector<Rational> alpha;
  Integer clearing;             // M
  std::vector<Integer> exponents;  // E_a per support point; zero exactly on the cell
  std::vector<double> exponents_d;
  std::vector<LiftedPointSet::Point> points;
  Eigen::MatrixXcd coefficients;
};

/// Throws InvalidCellError unless exactly the cell points have exponent 0
/// and all others are positive.
HomotopyDescriptor build_homotopy(const WitnessProblem& problem, const Cell& cell);

/// The system C (y^Gamma)^T = 0 on gamma = (a_0 .. a_d) with C of size
/// d x (d+1), reduced by G = C[:, :d]^{-1} to y^{a_j - a_d} = -(G C)_{j,d}.
/// Throws SingularCoefficientsError when the reduction is ill-posed.
BinomialSystem start_system(const std::vector<LiftedPointSet::Point>& gamma,
                            const Eigen::MatrixXcd& C);
BinomialSystem start_system(const WitnessProblem& problem, const Cell& cell);

/// All solutions of a zero-dimensional start system.
std::vector<ComplexVector> start_solutions(const BinomialSystem& start);

/// max_i |sum_j C_ij y^{a_j}| / (1 + sum_j |C_ij y^{a_j}|).
double start_residual(const std::vector<LiftedPointSet::Point>& gamma,
                      const Eigen::MatrixXcd& C, const ComplexVector& y);

/// Relative residual of sum_a c_{i,a} t^a = 0, scaled like start_residual.
double cut_system_residual(const WitnessProblem& problem, const ComplexVector& t);

/// Relative residual of sum_j c_ij x_j = c_i0.
double affine_cut_residual(const WitnessProblem& problem, const ComplexVector& x);

/// max_k |a_k - b_k| / max(|a_k|, |b_k|): the relative max-norm used to
/// tell torus points apart.
double torus_distance(const ComplexVector& a, const ComplexVector& b);

enum class PathStatus { Converged, Diverged, Failed };

struct TrackedPath {
  ComplexVector start;
  ComplexVector end;
  PathStatus status = PathStatus::Failed;
  double residual = 0.0;
  std::size_t steps = 0;
};

struct TrackOptions {
  double initial_step = 1e-2;
  double min_step = 1e-14;
  double divergence_norm = 1e14;
  double newton_tolerance = 1e-10;
  unsigned newton_iterations = 3;
  double end_tolerance = 1e-8;
  std::size_t max_steps = 200000;
};

/// Predictor-corrector from u = 0 to u = 1. The end is a solution t of the
/// cut system.
TrackedPath track(const HomotopyDescriptor& h, const ComplexVector& start,
                  const TrackOptions& options = {});

struct WitnessOptions {
  std::uint64_t seed = 0;          // cut coefficients
  std::uint64_t lifting_seed = 0;
  unsigned workers = 1;
  LpMode mode = LpMode::Float;
  unsigned max_regenerations = 8;
  double dedup_tolerance = 1e-6;
  TrackOptions track;
};

struct WitnessPoint {
  ComplexVector x;
  ComplexVector t;
  double system_residual = 0.0;
  double cut_residual = 0.0;
};

struct WitnessSet {
  std::vector<WitnessPoint> points;  // sorted by the real part of x_0
  std::size_t dimension = 0;
  Integer degree = 0;                // total volume of the subdivision
  std::size_t paths = 0;
  std::size_t converged = 0;
  std::size_t diverged = 0;
  std::size_t failed = 0;
  std::size_t duplicates = 0;
  std::size_t total_steps = 0;
  std::size_t regenerations = 0;
  std::uint64_t coefficient_seed = 0;
  std::uint64_t lifting_seed = 0;
  /// Every path converged and the distinct endpoints number `degree`.
  bool complete = false;
};

/// Witness points of the component with the given torsion indices; an
/// empty tuple selects the component with all indices zero.
/// Throws InconsistentSystemError on an empty solution set and
/// DimensionError when the components are points.
WitnessSet witness_set(const BinomialSystem& sys, const std::vector<Integer>& component_indices,
                       const WitnessOptions& options = {});

}  // namespace bintope
