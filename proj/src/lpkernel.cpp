#include "bintope/lpkernel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <type_traits>

#include "bintope/errors.hpp"

namespace bintope {

LiftedPointSet::LiftedPointSet(std::vector<Point> points, std::vector<long> lifting,
                               std::uint64_t seed)
    : dim_(0), seed_(seed), rows_(1, 1) {
  if (points.empty()) throw DimensionError("LiftedPointSet: no points");
  if (points.size() != lifting.size()) {
    throw DimensionError("LiftedPointSet: lifting length != point count");
  }
  dim_ = points.front().size();
  if (dim_ == 0) throw DimensionError("LiftedPointSet: points must have dimension >= 1");
  std::map<Point, std::size_t> seen;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != dim_) {
      throw DimensionError("LiftedPointSet: points of mixed dimension");
    }
    if (seen.emplace(points[i], points_.size()).second) {
      points_.push_back(std::move(points[i]));
      lifting_.push_back(lifting[i]);
    }
  }
  rows_ = IntMatrix(points_.size(), dim_ + 1);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t k = 0; k < dim_; ++k) rows_(i, k) = points_[i][k];
    rows_(i, dim_) = -1;
  }
}

LiftedPointSet LiftedPointSet::with_random_lifting(std::vector<Point> points,
                                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<long> lifting(points.size());
  // Top 20 bits of each draw; unlike std::uniform_int_distribution this is
  // identical across standard libraries.
  for (auto& w : lifting) w = static_cast<long>(rng() >> 44);
  return LiftedPointSet(std::move(points), std::move(lifting), seed);
}

LiftedPointSet LiftedPointSet::relifted(std::uint64_t seed) const {
  return with_random_lifting(points_, seed);
}

Rational LiftedPointSet::slack(std::size_t i, const std::vector<Rational>& x) const {
  Rational h = lifting_[i];
  for (std::size_t k = 0; k < dim_; ++k) {
    if (points_[i][k] != 0) h += points_[i][k] * x[k];
  }
  h -= x[dim_];
  return h;
}

namespace {

// Raised by double-precision arithmetic when a decision cannot be made
// reliably; the caller reruns in exact arithmetic.
struct Uncertain {};

double to_double(double v) { return v; }
double to_double(const Rational& v) { return v.get_d(); }

bool negative(double v, double tol) { return v < -tol; }
bool negative(const Rational& v, double) { return sgn(v) < 0; }
bool near_zero(double v, double tol) { return std::abs(v) <= tol; }
bool near_zero(const Rational& v, double) { return sgn(v) == 0; }

// -1, 0, +1 with a relative tie band for doubles.
int compare(double a, double b, double rel) {
  if (std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)})) return 0;
  return a < b ? -1 : 1;
}
int compare(const Rational& a, const Rational& b, double) { return cmp(a, b); }

template <class T>
[[noreturn]] void numerical_failure(const char* what) {
  if constexpr (std::is_same_v<T, double>) {
    (void)what;
    throw Uncertain{};
  } else {
    throw StateError(what);
  }
}

// LU factorization of a small dense matrix with row pivoting.
template <class T>
class DenseLu {
 public:
  bool factor(std::vector<T> a, std::size_t n) {
    n_ = n;
    lu_ = std::move(a);
    perm_.resize(n);
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = n;
      if constexpr (std::is_same_v<T, double>) {
        double best = 0.0;
        for (std::size_t i = k; i < n; ++i) {
          if (std::abs(lu_[i * n + k]) > best) {
            best = std::abs(lu_[i * n + k]);
            p = i;
          }
        }
        if (best < 1e-11) return false;
      } else {
        for (std::size_t i = k; i < n && p == n; ++i) {
          if (sgn(lu_[i * n + k]) != 0) p = i;
        }
        if (p == n) return false;
      }
      if (p != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_[k * n + j], lu_[p * n + j]);
        std::swap(perm_[k], perm_[p]);
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        if (near_zero(lu_[i * n + k], 0.0)) continue;
        T l = lu_[i * n + k] / lu_[k * n + k];
        lu_[i * n + k] = l;
        for (std::size_t j = k + 1; j < n; ++j) lu_[i * n + j] -= l * lu_[k * n + j];
      }
    }
    return true;
  }

  // A y = b.
  std::vector<T> solve(const std::vector<T>& b) const {
    std::vector<T> y(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      y[i] = b[perm_[i]];
      for (std::size_t j = 0; j < i; ++j) y[i] -= lu_[i * n_ + j] * y[j];
    }
    for (std::size_t i = n_; i-- > 0;) {
      for (std::size_t j = i + 1; j < n_; ++j) y[i] -= lu_[i * n_ + j] * y[j];
      y[i] /= lu_[i * n_ + i];
    }
    return y;
  }

  // A^T y = b, using A^T = U^T L^T P.
  std::vector<T> solve_transpose(const std::vector<T>& b) const {
    std::vector<T> w(b);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < i; ++j) w[i] -= lu_[j * n_ + i] * w[j];
      w[i] /= lu_[i * n_ + i];
    }
    for (std::size_t i = n_; i-- > 0;) {
      for (std::size_t j = i + 1; j < n_; ++j) w[i] -= lu_[j * n_ + i] * w[j];
    }
    std::vector<T> y(n_);
    for (std::size_t i = 0; i < n_; ++i) y[perm_[i]] = w[i];
    return y;
  }

 private:
  std::size_t n_ = 0;
  std::vector<T> lu_;
  std::vector<std::size_t> perm_;
};

// Constraints h_i(x) = rows_i . x + off_i >= 0.
template <class T>
struct Polyhedron {
  std::size_t nv = 0;
  std::size_t m = 0;
  std::vector<T> rows;
  std::vector<T> off;
  double slack_tol = 0.0;
  double rate_tol = 0.0;

  T dot(std::size_t i, const std::vector<T>& x) const {
    T acc = 0;
    for (std::size_t k = 0; k < nv; ++k) {
      if (!near_zero(rows[i * nv + k], 0.0)) acc += rows[i * nv + k] * x[k];
    }
    return acc;
  }
  T slack(std::size_t i, const std::vector<T>& x) const { return dot(i, x) + off[i]; }

  bool factor(DenseLu<T>& lu, const std::vector<std::size_t>& basis) const {
    std::vector<T> a(nv * nv);
    for (std::size_t p = 0; p < nv; ++p) {
      for (std::size_t k = 0; k < nv; ++k) a[p * nv + k] = rows[basis[p] * nv + k];
    }
    return lu.factor(std::move(a), nv);
  }

  std::vector<T> vertex(const DenseLu<T>& lu, const std::vector<std::size_t>& basis) const {
    std::vector<T> rhs(nv);
    for (std::size_t p = 0; p < nv; ++p) rhs[p] = -off[basis[p]];
    return lu.solve(rhs);
  }
};

template <class T>
Polyhedron<T> lifted_polyhedron(const LiftedPointSet& S) {
  Polyhedron<T> pr;
  pr.nv = S.dim() + 1;
  pr.m = S.size();
  pr.rows.resize(pr.m * pr.nv);
  pr.off.resize(pr.m);
  long max_coord = 1;
  long max_lift = 1;
  for (std::size_t i = 0; i < pr.m; ++i) {
    for (std::size_t k = 0; k < S.dim(); ++k) {
      pr.rows[i * pr.nv + k] = S.point(i)[k];
      max_coord = std::max(max_coord, std::abs(S.point(i)[k]));
    }
    pr.rows[i * pr.nv + S.dim()] = -1;
    pr.off[i] = S.lifting(i);
    max_lift = std::max(max_lift, std::abs(S.lifting(i)));
  }
  pr.slack_tol = 1e-9 * static_cast<double>(max_lift);
  pr.rate_tol = 1e-9 * static_cast<double>(max_coord);
  return pr;
}

enum class Outcome { Optimal, Stopped, Degenerate, Unbounded };

template <class T>
struct Run {
  Outcome outcome = Outcome::Optimal;
  std::vector<std::size_t> basis;
  std::vector<T> x;
  std::size_t iterations = 0;
};

// Primal simplex over the vertices of a pointed polyhedron, minimizing
// grad . x. Constraints marked fixed stay tight. The run stops early as
// soon as `stop` becomes tight. With allow_degenerate = false any vertex
// with more than nv tight constraints ends the run as Degenerate.
template <class T>
Run<T> simplex(const Polyhedron<T>& pr, std::vector<std::size_t> basis,
               const std::vector<char>& fixed, const std::vector<T>& grad,
               std::optional<std::size_t> stop, bool allow_degenerate) {
  Run<T> run;
  std::vector<char> in_basis(pr.m, 0);
  for (auto b : basis) in_basis[b] = 1;
  const std::size_t max_iterations = 50 * (pr.m + pr.nv) + 1000;
  DenseLu<T> lu;
  for (;;) {
    if (!pr.factor(lu, basis)) numerical_failure<T>("simplex: singular basis");
    run.x = pr.vertex(lu, basis);
    if (stop && in_basis[*stop]) {
      run.outcome = Outcome::Stopped;
      break;
    }

    std::vector<T> slack(pr.m);
    for (std::size_t j = 0; j < pr.m; ++j) {
      if (in_basis[j]) continue;
      slack[j] = pr.slack(j, run.x);
      if (!allow_degenerate && near_zero(slack[j], pr.slack_tol)) {
        run.outcome = Outcome::Degenerate;
        run.basis = basis;
        return run;
      }
      if constexpr (std::is_same_v<T, double>) {
        if (slack[j] < 0) slack[j] = 0;
      }
    }

    const std::vector<T> lambda = lu.solve_transpose(grad);
    // Bland: the smallest constraint index with a negative multiplier leaves.
    std::size_t leave_pos = pr.nv;
    for (std::size_t p = 0; p < pr.nv; ++p) {
      if (fixed[basis[p]] || !negative(lambda[p], pr.rate_tol)) continue;
      if (leave_pos == pr.nv || basis[p] < basis[leave_pos]) leave_pos = p;
    }
    if (leave_pos == pr.nv) {
      run.outcome = Outcome::Optimal;
      break;
    }

    std::vector<T> unit(pr.nv, T(0));
    unit[leave_pos] = 1;
    const std::vector<T> dir = lu.solve(unit);
    std::size_t enter = pr.m;
    T best_t = 0;
    bool tie = false;
    for (std::size_t j = 0; j < pr.m; ++j) {
      if (in_basis[j]) continue;
      const T rate = pr.dot(j, dir);
      if (!negative(rate, pr.rate_tol)) continue;
      const T t = slack[j] / (-rate);
      if (enter == pr.m) {
        enter = j;
        best_t = t;
        tie = false;
        continue;
      }
      const int c = compare(t, best_t, 1e-9);
      if (c < 0) {
        enter = j;
        best_t = t;
        tie = false;
      } else if (c == 0) {
        tie = true;
        if (stop && j == *stop) enter = j;
      }
    }
    if (enter == pr.m) {
      run.outcome = Outcome::Unbounded;
      break;
    }
    if (tie && !allow_degenerate) {
      run.outcome = Outcome::Degenerate;
      break;
    }
    in_basis[basis[leave_pos]] = 0;
    basis[leave_pos] = enter;
    in_basis[enter] = 1;
    if (++run.iterations > max_iterations) numerical_failure<T>("simplex: iteration limit");
  }
  run.basis = std::move(basis);
  return run;
}

std::vector<std::size_t> sorted(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

template <class T>
void fill_normal(LpAnswer& ans, const std::vector<T>& x, std::size_t d) {
  ans.normal.resize(d);
  for (std::size_t k = 0; k < d; ++k) ans.normal[k] = to_double(x[k]);
}

IntMatrix rows_of(const LiftedPointSet& S, const std::vector<std::size_t>& idx) {
  IntMatrix R(idx.size(), S.dim() + 1);
  for (std::size_t p = 0; p < idx.size(); ++p) {
    for (std::size_t k = 0; k <= S.dim(); ++k) R(p, k) = S.constraint_rows()(idx[p], k);
  }
  return R;
}

// Affinely independent completion of F to d+1 points, or nullopt when F is
// dependent. Exact.
std::optional<std::vector<std::size_t>> complete_basis(const LiftedPointSet& S,
                                                       const std::vector<std::size_t>& F) {
  std::vector<std::size_t> basis = F;
  if (!F.empty() && rank_exact(rows_of(S, F)) < F.size()) return std::nullopt;
  for (std::size_t i = 0; i < S.size() && basis.size() < S.dim() + 1; ++i) {
    if (std::find(basis.begin(), basis.end(), i) != basis.end()) continue;
    basis.push_back(i);
    if (rank_exact(rows_of(S, basis)) < basis.size()) basis.pop_back();
  }
  if (basis.size() < S.dim() + 1) {
    throw DimensionError("lpkernel: points do not span an affine space of full dimension");
  }
  return basis;
}

// Status for an affinely dependent fixed set: inconsistent tightness means
// the node cannot be a lower face; consistent means several dependent
// points lie on one lifted hyperplane.
LpStatus dependent_status(const LiftedPointSet& S, const std::vector<std::size_t>& F) {
  IntMatrix R = rows_of(S, F);
  IntMatrix aug(F.size(), S.dim() + 2);
  for (std::size_t p = 0; p < F.size(); ++p) {
    for (std::size_t k = 0; k <= S.dim(); ++k) aug(p, k) = R(p, k);
    aug(p, S.dim() + 1) = -S.lifting(F[p]);
  }
  return rank_exact(aug) > rank_exact(R) ? LpStatus::ParentInfeasible : LpStatus::Degenerate;
}

// Feasible basis containing F, found by minimizing an auxiliary variable tau
// that relaxes every constraint outside an initial completion B0.
template <class T>
std::optional<std::vector<std::size_t>> phase_one(const Polyhedron<T>& pr,
                                                  const std::vector<std::size_t>& F,
                                                  const std::vector<std::size_t>& B0,
                                                  LpStatus& status, std::size_t& iterations) {
  DenseLu<T> lu;
  if (!pr.factor(lu, B0)) numerical_failure<T>("phase one: singular start basis");
  const std::vector<T> x0 = pr.vertex(lu, B0);
  std::vector<char> in_b0(pr.m, 0);
  for (auto b : B0) in_b0[b] = 1;

  std::size_t worst = pr.m;
  T tau0 = 0;
  for (std::size_t j = 0; j < pr.m; ++j) {
    if (in_b0[j]) continue;
    const T v = T(-pr.slack(j, x0));
    if (worst == pr.m || compare(v, tau0, 0.0) > 0) {
      worst = j;
      tau0 = v;
    }
  }
  if (worst == pr.m || !negative(T(-tau0), pr.slack_tol)) return B0;

  Polyhedron<T> aux;
  aux.nv = pr.nv + 1;
  aux.m = pr.m + 1;
  aux.slack_tol = pr.slack_tol;
  aux.rate_tol = pr.rate_tol;
  aux.rows.assign(aux.m * aux.nv, T(0));
  aux.off.assign(aux.m, T(0));
  for (std::size_t i = 0; i < pr.m; ++i) {
    for (std::size_t k = 0; k < pr.nv; ++k) aux.rows[i * aux.nv + k] = pr.rows[i * pr.nv + k];
    aux.rows[i * aux.nv + pr.nv] = in_b0[i] ? 0 : 1;
    aux.off[i] = pr.off[i];
  }
  const std::size_t tau_row = pr.m;
  aux.rows[tau_row * aux.nv + pr.nv] = 1;

  std::vector<char> fixed(aux.m, 0);
  for (auto f : F) fixed[f] = 1;
  std::vector<T> grad(aux.nv, T(0));
  grad[pr.nv] = 1;
  std::vector<std::size_t> start = B0;
  start.push_back(worst);
  Run<T> run = simplex(aux, start, fixed, grad, std::nullopt, true);
  iterations += run.iterations;
  if (run.outcome != Outcome::Optimal) numerical_failure<T>("phase one: no optimum");
  if (negative(T(-run.x[pr.nv]), pr.slack_tol)) {
    status = LpStatus::ParentInfeasible;
    return std::nullopt;
  }
  auto it = std::find(run.basis.begin(), run.basis.end(), tau_row);
  if (it == run.basis.end()) {
    status = LpStatus::Degenerate;
    return std::nullopt;
  }
  run.basis.erase(it);
  return run.basis;
}

template <class T>
LpAnswer extend_impl(const LiftedPointSet& S, const std::vector<std::size_t>& F,
                     std::optional<std::size_t> candidate,
                     const std::vector<std::size_t>* warm) {
  const Polyhedron<T> pr = lifted_polyhedron<T>(S);
  LpAnswer ans;
  std::vector<std::size_t> basis;
  if (warm) {
    basis = *warm;
  } else {
    auto B0 = complete_basis(S, F);
    if (!B0) {
      ans.status = dependent_status(S, F);
      return ans;
    }
    auto found = phase_one(pr, F, *B0, ans.status, ans.iterations);
    if (!found) return ans;
    basis = std::move(*found);
  }

  std::vector<char> fixed(pr.m, 0);
  for (auto f : F) fixed[f] = 1;
  std::vector<T> grad(pr.nv, T(0));
  if (candidate) {
    for (std::size_t k = 0; k < pr.nv; ++k) grad[k] = pr.rows[*candidate * pr.nv + k];
  }
  Run<T> run = simplex(pr, basis, fixed, grad, candidate, false);
  ans.iterations += run.iterations;
  ans.basis = sorted(run.basis);
  fill_normal(ans, run.x, S.dim());
  switch (run.outcome) {
    case Outcome::Stopped:
      ans.status = LpStatus::Feasible;
      ans.objective = 0.0;
      break;
    case Outcome::Optimal:
      if (!candidate) {
        ans.status = LpStatus::Feasible;
      } else {
        ans.objective = to_double(pr.slack(*candidate, run.x));
        ans.status = LpStatus::Infeasible;
      }
      break;
    case Outcome::Degenerate:
      ans.status = LpStatus::Degenerate;
      break;
    case Outcome::Unbounded:
      numerical_failure<T>("extension: unbounded objective");
  }
  return ans;
}

template <class T>
LpAnswer pivot_impl(const LiftedPointSet& S, const std::vector<std::size_t>& cell,
                    std::size_t leave_pos) {
  const Polyhedron<T> pr = lifted_polyhedron<T>(S);
  LpAnswer ans;
  DenseLu<T> lu;
  if (!pr.factor(lu, cell)) numerical_failure<T>("pivot: singular cell");
  const std::vector<T> x = pr.vertex(lu, cell);
  std::vector<T> unit(pr.nv, T(0));
  unit[leave_pos] = 1;
  const std::vector<T> dir = lu.solve(unit);
  std::vector<char> in_cell(pr.m, 0);
  for (auto c : cell) in_cell[c] = 1;

  std::size_t enter = pr.m;
  T best_t = 0;
  bool tie = false;
  for (std::size_t j = 0; j < pr.m; ++j) {
    if (in_cell[j]) continue;
    T s = pr.slack(j, x);
    if (near_zero(s, pr.slack_tol)) {
      ans.status = LpStatus::Degenerate;
      return ans;
    }
    const T rate = pr.dot(j, dir);
    if (!negative(rate, pr.rate_tol)) continue;
    const T t = s / (-rate);
    const int c = enter == pr.m ? -1 : compare(t, best_t, 1e-9);
    if (c < 0) {
      enter = j;
      best_t = t;
      tie = false;
    } else if (c == 0) {
      tie = true;
    }
  }
  ans.iterations = 1;
  if (enter == pr.m) {
    ans.status = LpStatus::Infeasible;
    return ans;
  }
  if (tie) {
    ans.status = LpStatus::Degenerate;
    return ans;
  }
  std::vector<std::size_t> next = cell;
  next[leave_pos] = enter;
  std::vector<T> y = x;
  for (std::size_t k = 0; k < pr.nv; ++k) y[k] += best_t * dir[k];
  ans.status = LpStatus::Feasible;
  ans.basis = sorted(next);
  fill_normal(ans, y, S.dim());
  return ans;
}

std::vector<Rational> exact_lambda(const LiftedPointSet& S,
                                   const std::vector<std::size_t>& basis,
                                   std::size_t candidate) {
  const IntMatrix Rt = rows_of(S, basis).transpose();
  std::vector<Integer> g(S.dim() + 1);
  for (std::size_t k = 0; k <= S.dim(); ++k) g[k] = S.constraint_rows()(candidate, k);
  return solve_exact(Rt, g);
}

bool contains(const std::vector<std::size_t>& set, std::size_t v) {
  return std::find(set.begin(), set.end(), v) != set.end();
}

// Every point outside `basis` strictly above the hyperplane of x.
bool strictly_supported(const LiftedPointSet& S, const std::vector<std::size_t>& basis,
                        const std::vector<Rational>& x) {
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (!contains(basis, i) && sgn(S.slack(i, x)) <= 0) return false;
  }
  return true;
}

// Exact confirmation of a double-precision extension answer.
bool certify_extension(const LiftedPointSet& S, const std::vector<std::size_t>& F,
                       std::optional<std::size_t> candidate, const LpAnswer& ans) {
  if (ans.status != LpStatus::Feasible && ans.status != LpStatus::Infeasible) return false;
  if (ans.basis.size() != S.dim() + 1) return false;
  for (auto f : F) {
    if (!contains(ans.basis, f)) return false;
  }
  try {
    const std::vector<Rational> x = exact_vertex(S, ans.basis);
    if (!strictly_supported(S, ans.basis, x)) return false;
    if (ans.status == LpStatus::Feasible) return !candidate || contains(ans.basis, *candidate);
    // Optimality: multipliers of the non-fixed tight constraints are nonnegative.
    const std::vector<Rational> lambda = exact_lambda(S, ans.basis, *candidate);
    for (std::size_t p = 0; p < ans.basis.size(); ++p) {
      if (!contains(F, ans.basis[p]) && sgn(lambda[p]) < 0) return false;
    }
    return sgn(S.slack(*candidate, x)) > 0;
  } catch (const DomainError&) {
    return false;
  }
}

bool certify_pivot(const LiftedPointSet& S, const std::vector<std::size_t>& cell,
                   std::size_t leave_pos, const LpAnswer& ans) {
  try {
    if (ans.status == LpStatus::Feasible) {
      if (contains(ans.basis, cell[leave_pos])) return false;
      std::size_t shared = 0;
      for (auto c : cell) shared += contains(ans.basis, c) ? 1 : 0;
      if (shared != S.dim()) return false;
      return strictly_supported(S, ans.basis, exact_vertex(S, ans.basis));
    }
    if (ans.status == LpStatus::Infeasible) {
      // No constraint blocks the edge direction.
      std::vector<Integer> e(S.dim() + 1, Integer(0));
      e[leave_pos] = 1;
      const std::vector<Rational> dir = solve_exact(rows_of(S, cell), e);
      for (std::size_t j = 0; j < S.size(); ++j) {
        if (contains(cell, j)) continue;
        Rational rate = 0;
        for (std::size_t k = 0; k <= S.dim(); ++k) {
          rate += Rational(S.constraint_rows()(j, k)) * dir[k];
        }
        if (sgn(rate) < 0) return false;
      }
      return true;
    }
  } catch (const DomainError&) {
  }
  return false;
}

void check_index(const LiftedPointSet& S, std::size_t i, const char* what) {
  if (i >= S.size()) {
    throw DomainError(std::string(what) + ": index " + std::to_string(i) + " out of range");
  }
}

void check_node(const LiftedPointSet& S, const std::vector<std::size_t>& node,
                const char* what) {
  if (node.size() > S.dim() + 1) {
    throw DimensionError(std::string(what) + ": node larger than d+1");
  }
  for (std::size_t p = 0; p < node.size(); ++p) {
    check_index(S, node[p], what);
    for (std::size_t q = 0; q < p; ++q) {
      if (node[p] == node[q]) throw DomainError(std::string(what) + ": repeated index");
    }
  }
}

template <class F>
LpAnswer dispatch(LpMode mode, F&& solve, const std::function<bool(const LpAnswer&)>& certify) {
  if (mode == LpMode::Exact) {
    LpAnswer ans = solve(Rational());
    ans.used_exact = true;
    return ans;
  }
  try {
    LpAnswer ans = solve(0.0);
    if (mode == LpMode::FloatUnchecked || certify(ans)) return ans;
  } catch (const Uncertain&) {
  }
  LpAnswer ans = solve(Rational());
  ans.used_exact = true;
  return ans;
}

}  // namespace

std::vector<Rational> exact_vertex(const LiftedPointSet& S,
                                   const std::vector<std::size_t>& basis) {
  if (basis.size() != S.dim() + 1) throw DimensionError("exact_vertex: basis size != d+1");
  std::vector<Integer> rhs(basis.size());
  for (std::size_t p = 0; p < basis.size(); ++p) rhs[p] = -S.lifting(basis[p]);
  return solve_exact(rows_of(S, basis), rhs);
}

LpAnswer extend_feasible(const LiftedPointSet& S, const std::vector<std::size_t>& node,
                         std::size_t candidate, LpMode mode,
                         const std::vector<std::size_t>* warm_basis) {
  check_node(S, node, "extend_feasible");
  check_index(S, candidate, "extend_feasible");
  if (contains(node, candidate)) throw DomainError("extend_feasible: candidate is in node");
  if (node.size() == S.dim() + 1) {
    throw DimensionError("extend_feasible: node is already a full cell");
  }
  if (warm_basis) {
    check_node(S, *warm_basis, "extend_feasible");
    if (warm_basis->size() != S.dim() + 1) {
      throw DimensionError("extend_feasible: warm basis must have d+1 points");
    }
    for (auto f : node) {
      if (!contains(*warm_basis, f)) {
        throw DomainError("extend_feasible: warm basis does not contain the node");
      }
    }
  }
  auto solve = [&](auto zero) {
    using T = decltype(zero);
    return extend_impl<T>(S, node, candidate, warm_basis);
  };
  return dispatch(mode, solve, [&](const LpAnswer& a) {
    return certify_extension(S, node, candidate, a);
  });
}

LpAnswer any_lower_facet(const LiftedPointSet& S, LpMode mode) {
  const std::vector<std::size_t> none;
  auto solve = [&](auto zero) {
    using T = decltype(zero);
    return extend_impl<T>(S, none, std::nullopt, nullptr);
  };
  return dispatch(mode, solve, [&](const LpAnswer& a) {
    return certify_extension(S, none, std::nullopt, a);
  });
}

LpAnswer pivot_step(const LiftedPointSet& S, const std::vector<std::size_t>& cell,
                    std::size_t leave, LpMode mode) {
  check_node(S, cell, "pivot_step");
  if (cell.size() != S.dim() + 1) throw DimensionError("pivot_step: cell must have d+1 points");
  const auto it = std::find(cell.begin(), cell.end(), leave);
  if (it == cell.end()) throw DomainError("pivot_step: leaving index not in cell");
  const std::size_t leave_pos = static_cast<std::size_t>(it - cell.begin());
  auto solve = [&](auto zero) {
    using T = decltype(zero);
    return pivot_impl<T>(S, cell, leave_pos);
  };
  return dispatch(mode, solve, [&](const LpAnswer& a) {
    return certify_pivot(S, cell, leave_pos, a);
  });
}

}  // namespace bintope
