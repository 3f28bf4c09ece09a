#include "bintope/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "bintope/errors.hpp"
#include "bintope/parallel.hpp"

namespace bintope {

namespace {

using Point = LiftedPointSet::Point;
using Vec = Eigen::VectorXcd;

Complex unit_circle(std::mt19937_64& rng) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return std::polar(1.0, angle);
}

Complex monomial(const Vec& y, const Point& a) {
  Complex v = 1.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] != 0) v *= complex_pow(y[k], a[k]);
  }
  return v;
}

Vec to_eigen(const ComplexVector& v) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

ComplexVector from_eigen(const Vec& v) { return ComplexVector(v.data(), v.data() + v.size()); }

double relative_residual(const std::vector<Point>& points, const Eigen::MatrixXcd& C,
                         const Vec& y) {
  double worst = 0.0;
  std::vector<Complex> mono(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) mono[j] = monomial(y, points[j]);
  for (Eigen::Index i = 0; i < C.rows(); ++i) {
    Complex sum = 0.0;
    double scale = 1.0;
    for (std::size_t j = 0; j < points.size(); ++j) {
      const Complex term = C(i, static_cast<Eigen::Index>(j)) * mono[j];
      sum += term;
      scale += std::abs(term);
    }
    worst = std::max(worst, std::abs(sum) / scale);
  }
  return worst;
}

bool finite(const Vec& y) {
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    if (!std::isfinite(y[k].real()) || !std::isfinite(y[k].imag())) return false;
  }
  return true;
}

// Evaluates H, dH/dy and dH/dsigma at u = 1 - sigma.
class Evaluator {
 public:
  explicit Evaluator(const HomotopyDescriptor& h) : h_(h) {
    for (std::size_t a = 0; a < h.points.size(); ++a) {
      if (h.coefficients.col(static_cast<Eigen::Index>(a)).cwiseAbs().maxCoeff() > 0.0) {
        active_.push_back(a);
      }
    }
  }

  void operator()(const Vec& y, double sigma, Vec& F, Eigen::MatrixXcd& J, Vec* Fs) const {
    const Eigen::Index d = y.size();
    F.setZero(h_.coefficients.rows());
    J.setZero(h_.coefficients.rows(), d);
    if (Fs) Fs->setZero(h_.coefficients.rows());
    const double logu = std::log1p(-sigma);
    for (auto a : active_) {
      const double E = h_.exponents_d[a];
      const double w = E == 0.0 ? 1.0 : std::exp(E * logu);
      const double dw = E == 0.0 ? 0.0 : (E == 1.0 ? -1.0 : -E * std::exp((E - 1.0) * logu));
      if (w == 0.0 && dw == 0.0) continue;
      const Point& pt = h_.points[a];
      const Complex mono = monomial(y, pt);
      const auto col = h_.coefficients.col(static_cast<Eigen::Index>(a));
      F += col * (mono * w);
      if (Fs) *Fs += col * (mono * dw);
      for (Eigen::Index k = 0; k < d; ++k) {
        if (pt[k] != 0) J.col(k) += col * (static_cast<double>(pt[k]) * mono * w / y[k]);
      }
    }
  }

 private:
  const HomotopyDescriptor& h_;
  std::vector<std::size_t> active_;
};

}  // namespace

double torus_distance(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw DimensionError("torus_distance: length mismatch");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double scale = std::max(std::abs(a[k]), std::abs(b[k]));
    if (scale > 0.0) worst = std::max(worst, std::abs(a[k] - b[k]) / scale);
  }
  return worst;
}

WitnessProblem make_problem(const ComponentParametrization& component,
                            std::uint64_t coefficient_seed, std::uint64_t lifting_seed) {
  const std::size_t n = component.num_vars();
  const std::size_t r = component.torsion_point.size();
  const std::size_t d = n - r;
  if (d == 0) throw DimensionError("witness: the component is a point");

  std::vector<Point> points;
  points.reserve(n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    Point p(d);
    for (std::size_t k = 0; k < d; ++k) {
      const Integer& v = component.P(r + k, j);
      if (!v.fits_slong_p()) throw DomainError("witness: exponent out of range");
      p[k] = v.get_si();
    }
    points.push_back(std::move(p));
  }
  points.emplace_back(d, 0L);

  std::mt19937_64 rng(coefficient_seed);
  Eigen::MatrixXcd cut(d, n + 1);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j <= n; ++j) cut(i, j) = unit_circle(rng);
  }

  LiftedPointSet support = LiftedPointSet::with_random_lifting(points, lifting_seed);
  std::map<Point, std::size_t> where;
  for (std::size_t a = 0; a < support.size(); ++a) where.emplace(support.point(a), a);

  Eigen::MatrixXcd coefficients = Eigen::MatrixXcd::Zero(d, support.size());
  for (std::size_t j = 0; j < n; ++j) {
    Complex xi = 1.0;
    for (std::size_t i = 0; i < r; ++i) xi *= complex_pow(component.torsion_point[i], component.P(i, j));
    coefficients.col(where.at(points[j])) += cut.col(j + 1) * xi;
  }
  coefficients.col(where.at(points[n])) -= cut.col(0);

  return WitnessProblem{component, std::move(cut), std::move(support), std::move(coefficients),
                        coefficient_seed};
}

HomotopyDescriptor build_homotopy(const WitnessProblem& problem, const Cell& cell) {
  const LiftedPointSet& S = problem.support;
  const std::size_t d = S.dim();
  if (cell.indices.size() != d + 1 || cell.normal.size() != d) {
    throw InvalidCellError("homotopy: cell has the wrong shape");
  }
  for (auto i : cell.indices) {
    if (i >= S.size()) throw InvalidCellError("homotopy: cell index out of range");
  }
  const std::size_t a0 = cell.indices[0];
  std::vector<Rational> e(S.size());
  Integer M = 1;
  for (std::size_t a = 0; a < S.size(); ++a) {
    Rational v = S.lifting(a) - S.lifting(a0);
    for (std::size_t k = 0; k < d; ++k) v += (S.point(a)[k] - S.point(a0)[k]) * cell.normal[k];
    v.canonicalize();
    const bool in_cell = std::find(cell.indices.begin(), cell.indices.end(), a) != cell.indices.end();
    if (in_cell ? v != 0 : v <= 0) {
      throw InvalidCellError("homotopy: cell certificate does not hold");
    }
    mpz_lcm(M.get_mpz_t(), M.get_mpz_t(), v.get_den_mpz_t());
    e[a] = std::move(v);
  }

  HomotopyDescriptor h;
  h.cell = cell.indices;
  h.alpha = cell.normal;
  h.clearing = M;
  h.points = S.points();
  h.coefficients = problem.coefficients;
  for (const auto& v : e) {
    Integer E = v.get_num() * (M / v.get_den());
    h.exponents_d.push_back(E.get_d());
    h.exponents.push_back(std::move(E));
  }
  return h;
}

BinomialSystem start_system(const std::vector<Point>& gamma, const Eigen::MatrixXcd& C) {
  if (gamma.empty()) throw DimensionError("start system: empty support");
  const std::size_t d = gamma.size() - 1;
  if (static_cast<std::size_t>(C.rows()) != d || static_cast<std::size_t>(C.cols()) != d + 1) {
    throw DimensionError("start system: coefficient matrix must be d x (d+1)");
  }
  for (const auto& a : gamma) {
    if (a.size() != d) throw DimensionError("start system: point dimension mismatch");
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(C.leftCols(d));
  if (!(lu.rcond() > 1e-12)) throw SingularCoefficientsError("start system: C is singular");
  const Vec g = lu.solve(C.col(d));
  IntMatrix A(d, d);
  ComplexVector rhs(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (!(std::abs(g[j]) > 1e-12)) {
      throw SingularCoefficientsError("start system: eliminated coefficient vanishes");
    }
    for (std::size_t k = 0; k < d; ++k) A(k, j) = gamma[j][k] - gamma[d][k];
    rhs[j] = -g[j];
  }
  return BinomialSystem(std::move(A), std::move(rhs));
}

BinomialSystem start_system(const WitnessProblem& problem, const Cell& cell) {
  build_homotopy(problem, cell);
  std::vector<Point> gamma;
  Eigen::MatrixXcd C(problem.dim(), cell.indices.size());
  for (std::size_t j = 0; j < cell.indices.size(); ++j) {
    gamma.push_back(problem.support.point(cell.indices[j]));
    C.col(j) = problem.coefficients.col(cell.indices[j]);
  }
  return start_system(gamma, C);
}

std::vector<ComplexVector> start_solutions(const BinomialSystem& start) {
  SolutionStructure st = analyze(start);
  if (!st.consistent || st.dimension != 0) {
    throw InvalidCellError("start system: cell points are affinely dependent");
  }
  std::vector<ComplexVector> out;
  ComponentEnumerator it(st);
  while (auto comp = it.next()) out.push_back(evaluate_parametrization(*comp, {}));
  return out;
}

double start_residual(const std::vector<Point>& gamma, const Eigen::MatrixXcd& C,
                      const ComplexVector& y) {
  return relative_residual(gamma, C, to_eigen(y));
}

double cut_system_residual(const WitnessProblem& problem, const ComplexVector& t) {
  return relative_residual(problem.support.points(), problem.coefficients, to_eigen(t));
}

double affine_cut_residual(const WitnessProblem& problem, const ComplexVector& x) {
  const Eigen::MatrixXcd& c = problem.cut;
  if (static_cast<std::size_t>(c.cols()) != x.size() + 1) {
    throw DimensionError("affine cut: point has the wrong length");
  }
  double worst = 0.0;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    Complex sum = -c(i, 0);
    double scale = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const Complex term = c(i, static_cast<Eigen::Index>(j) + 1) * x[j];
      sum += term;
      scale += std::abs(term);
    }
    worst = std::max(worst, std::abs(sum) / scale);
  }
  return worst;
}

TrackedPath track(const HomotopyDescriptor& h, const ComplexVector& start,
                  const TrackOptions& options) {
  const Eigen::Index d = static_cast<Eigen::Index>(start.size());
  if (static_cast<Eigen::Index>(h.coefficients.rows()) != d) {
    throw DimensionError("track: start point has the wrong length");
  }
  TrackedPath path;
  path.start = start;
  Evaluator eval(h);
  const double max_exponent = *std::max_element(h.exponents_d.begin(), h.exponents_d.end());

  Vec y = to_eigen(start);
  Vec F, Fs, dy;
  Eigen::MatrixXcd J;
  double sigma = 1.0;
  double step = options.initial_step;
  unsigned successes = 0;

  auto escaped = [&](const Vec& v) {
    const double big = v.cwiseAbs().maxCoeff();
    const double small = v.cwiseAbs().minCoeff();
    return big > options.divergence_norm || small < 1.0 / options.divergence_norm;
  };

  auto correct = [&](Vec& v, double s) {
    for (unsigned it = 0; it < options.newton_iterations; ++it) {
      eval(v, s, F, J, nullptr);
      Eigen::PartialPivLU<Eigen::MatrixXcd> lu(J);
      const Vec delta = lu.solve(-F);
      if (!finite(delta)) return false;
      const double scale = 1.0 + v.cwiseAbs().maxCoeff();
      const double size = delta.cwiseAbs().maxCoeff();
      if (it == 0 && size > 0.1 * scale) return false;
      v += delta;
      if (size <= options.newton_tolerance * scale) return true;
    }
    return false;
  };

  while (sigma > 0.0) {
    if (path.steps >= options.max_steps) {
      path.status = PathStatus::Failed;
      path.end = from_eigen(y);
      return path;
    }
    ++path.steps;
    double next;
    if (max_exponent * sigma <= 1e-13) {
      next = 0.0;
    } else {
      next = step < 0.75 * sigma ? sigma - step : 0.25 * sigma;
    }

    eval(y, sigma, F, J, &Fs);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(J);
    dy = lu.solve(-Fs);
    Vec trial = y + dy * (next - sigma);
    const bool ok = finite(trial) && !escaped(trial) && correct(trial, next);
    if (ok) {
      y = trial;
      sigma = next;
      if (++successes >= 3) {
        step *= 2.0;
        successes = 0;
      }
      continue;
    }
    if (finite(trial) && trial.cwiseAbs().maxCoeff() > options.divergence_norm) {
      path.status = PathStatus::Diverged;
      path.end = from_eigen(trial);
      return path;
    }
    successes = 0;
    step *= 0.5;
    if (step < options.min_step) {
      path.status = PathStatus::Failed;
      path.end = from_eigen(y);
      return path;
    }
  }

  for (int it = 0; it < 10; ++it) {
    eval(y, 0.0, F, J, nullptr);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(J);
    const Vec delta = lu.solve(-F);
    if (!finite(delta)) break;
    y += delta;
    if (delta.cwiseAbs().maxCoeff() <= 1e-15 * (1.0 + y.cwiseAbs().maxCoeff())) break;
  }
  path.end = from_eigen(y);
  path.residual = relative_residual(h.points, h.coefficients, y);
  if (!finite(y) || escaped(y)) {
    path.status = PathStatus::Diverged;
  } else {
    path.status = path.residual < options.end_tolerance ? PathStatus::Converged : PathStatus::Failed;
  }
  return path;
}

WitnessSet witness_set(const BinomialSystem& sys, const std::vector<Integer>& component_indices,
                       const WitnessOptions& options) {
  AnalyzeOptions aopt;
  aopt.workers = options.workers;
  const SolutionStructure st = analyze(sys, aopt);
  if (!st.consistent) throw InconsistentSystemError("witness: the system has no solution in the torus");
  if (st.dimension == 0) throw DimensionError("witness: the components are points");
  const ComponentParametrization comp =
      component_at(st, component_indices.empty() ? std::vector<Integer>(st.rank, 0) : component_indices);

  WitnessProblem problem = make_problem(comp, options.seed, options.lifting_seed);
  SubdivideOptions sopt;
  sopt.workers = options.workers;
  sopt.mode = options.mode;
  sopt.seed = options.lifting_seed;
  const Subdivision sub = subdivide(problem.support, sopt);

  WitnessSet out;
  out.dimension = st.dimension;
  out.degree = sub.total_volume;
  out.lifting_seed = sub.lifting_seed;

  struct Task {
    std::size_t cell;
    ComplexVector start;
  };
  std::vector<HomotopyDescriptor> homotopies;
  std::vector<Task> tasks;
  for (unsigned attempt = 0;; ++attempt) {
    const std::uint64_t cseed = attempt == 0 ? options.seed : relift_seed(options.seed, attempt - 1);
    problem = make_problem(comp, cseed, options.lifting_seed);
    problem.support = sub.lifted;
    homotopies.clear();
    tasks.clear();
    try {
      for (std::size_t c = 0; c < sub.cells.size(); ++c) {
        homotopies.push_back(build_homotopy(problem, sub.cells[c]));
        for (auto& y : start_solutions(start_system(problem, sub.cells[c]))) {
          tasks.push_back({c, std::move(y)});
        }
      }
      out.coefficient_seed = cseed;
      out.regenerations = attempt;
      break;
    } catch (const SingularCoefficientsError&) {
      if (attempt >= options.max_regenerations) throw;
    }
  }

  std::vector<TrackedPath> paths(tasks.size());
  parallel_for(tasks.size(), options.workers, [&](std::size_t i) {
    paths[i] = track(homotopies[tasks[i].cell], tasks[i].start, options.track);
  });

  out.paths = paths.size();
  const double tol = options.dedup_tolerance;
  for (const auto& p : paths) {
    out.total_steps += p.steps;
    if (p.status == PathStatus::Diverged) ++out.diverged;
    if (p.status == PathStatus::Failed) ++out.failed;
    if (p.status != PathStatus::Converged) continue;
    ++out.converged;
    WitnessPoint w;
    w.t = p.end;
    w.x = evaluate_parametrization(comp, p.end);
    w.system_residual = residual(sys, w.x);
    w.cut_residual = affine_cut_residual(problem, w.x);
    const bool seen = std::any_of(out.points.begin(), out.points.end(), [&](const WitnessPoint& q) {
      return torus_distance(w.x, q.x) <= tol;
    });
    if (seen) {
      ++out.duplicates;
    } else {
      out.points.push_back(std::move(w));
    }
  }
  std::sort(out.points.begin(), out.points.end(), [](const WitnessPoint& a, const WitnessPoint& b) {
    if (a.x[0].real() != b.x[0].real()) return a.x[0].real() < b.x[0].real();
    return a.x[0].imag() < b.x[0].imag();
  });
  out.complete = out.converged == out.paths && Integer(out.points.size()) == out.degree;
  return out;
}

}  // namespace bintope
