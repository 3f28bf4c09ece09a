#include "bintope/binomial.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bintope/errors.hpp"

namespace bintope {

namespace {

ComplexVector to_complex(const std::vector<Rational>& values) {
  ComplexVector out;
  out.reserve(values.size());
  for (const auto& v : values) out.emplace_back(v.get_d(), 0.0);
  return out;
}

// q^e for a nonzero rational q.
Rational rational_pow(const Rational& q, const Integer& e) {
  if (sgn(e) == 0) return 1;
  if (abs(q) == 1) {
    if (sgn(q) > 0 || mpz_even_p(e.get_mpz_t())) return 1;
    return -1;
  }
  if (!mpz_fits_ulong_p(Integer(abs(e)).get_mpz_t())) {
    throw DomainError("exact rhs power: exponent too large");
  }
  const unsigned long k = mpz_get_ui(Integer(abs(e)).get_mpz_t());
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), k);
  Rational out(num, den);
  out.canonicalize();
  if (sgn(e) < 0) out = 1 / out;
  return out;
}

}  // namespace

BinomialSystem::BinomialSystem(IntMatrix exponents, ComplexVector rhs)
    : exponents_(std::move(exponents)), rhs_(std::move(rhs)) {
  validate();
}

BinomialSystem::BinomialSystem(IntMatrix exponents, std::vector<Rational> exact_rhs)
    : exponents_(std::move(exponents)),
      rhs_(to_complex(exact_rhs)),
      exact_rhs_(std::move(exact_rhs)) {
  for (const auto& v : *exact_rhs_) {
    if (sgn(v) == 0) throw DomainError("BinomialSystem: rhs entries must be nonzero");
  }
  validate();
}

void BinomialSystem::validate() const {
  if (rhs_.size() != exponents_.cols()) {
    throw DimensionError("BinomialSystem: rhs length " + std::to_string(rhs_.size()) +
                         " != equation count " + std::to_string(exponents_.cols()));
  }
  for (const auto& v : rhs_) {
    if (v == Complex(0.0, 0.0)) {
      throw DomainError("BinomialSystem: rhs entries must be nonzero");
    }
  }
}

BinomialSystem BinomialSystem::from_binomials(std::size_t num_vars,
                                              const std::vector<Binomial>& equations) {
  if (equations.empty()) throw DimensionError("BinomialSystem: no equations");
  IntMatrix A(num_vars, equations.size());
  ComplexVector b;
  b.reserve(equations.size());
  for (std::size_t j = 0; j < equations.size(); ++j) {
    const auto& eq = equations[j];
    if (eq.alpha.size() != num_vars || eq.beta.size() != num_vars) {
      throw DimensionError("BinomialSystem: exponent vector length mismatch");
    }
    if (eq.c1 == Complex(0.0) || eq.c2 == Complex(0.0)) {
      throw DomainError("BinomialSystem: binomial coefficients must be nonzero");
    }
    for (std::size_t i = 0; i < num_vars; ++i) A(i, j) = eq.alpha[i] - eq.beta[i];
    b.push_back(-eq.c2 / eq.c1);
  }
  return BinomialSystem(std::move(A), std::move(b));
}

Complex complex_pow(Complex z, long e) {
  if (z == Complex(0.0)) throw DomainError("complex_pow: zero base");
  if (e == 0) return 1.0;
  if (z == Complex(1.0)) return 1.0;
  if (z == Complex(-1.0)) return (e % 2 == 0) ? 1.0 : -1.0;
  const unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
  if (k <= 16) {
    Complex acc = 1.0;
    for (unsigned long i = 0; i < k; ++i) acc *= z;
    return e < 0 ? 1.0 / acc : acc;
  }
  const double ed = static_cast<double>(e);
  return std::exp(ed * std::log(z));
}

Complex complex_pow(Complex z, const Integer& e) {
  if (e.fits_slong_p()) return complex_pow(z, e.get_si());
  if (z == Complex(0.0)) throw DomainError("complex_pow: zero base");
  if (z == Complex(1.0)) return 1.0;
  if (z == Complex(-1.0)) return mpz_even_p(e.get_mpz_t()) ? 1.0 : -1.0;
  return std::exp(e.get_d() * std::log(z));
}

namespace {

// x^M split into log-modulus and unit phase per column. Keeping them apart
// avoids underflow and overflow of intermediate products.
void power_parts(const ComplexVector& x, const IntMatrix& M, std::vector<double>& log_modulus,
                 ComplexVector& phase) {
  if (x.size() != M.rows()) throw DimensionError("matrix_power: length mismatch");
  std::vector<double> lx(x.size());
  ComplexVector px(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == Complex(0.0)) throw DomainError("matrix_power: zero base");
    lx[i] = std::log(std::abs(x[i]));
    px[i] = x[i] / std::abs(x[i]);
  }
  log_modulus.assign(M.cols(), 0.0);
  phase.assign(M.cols(), Complex(1.0));
  for (std::size_t j = 0; j < M.cols(); ++j) {
    for (std::size_t i = 0; i < M.rows(); ++i) {
      if (sgn(M(i, j)) == 0) continue;
      log_modulus[j] += M(i, j).get_d() * lx[i];
      phase[j] *= complex_pow(px[i], M(i, j));
    }
    phase[j] /= std::abs(phase[j]);
  }
}

}  // namespace

ComplexVector matrix_power(const ComplexVector& x, const IntMatrix& M) {
  std::vector<double> lm;
  ComplexVector ph;
  power_parts(x, M, lm, ph);
  ComplexVector out(M.cols());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::exp(lm[j]) * ph[j];
  return out;
}

SolutionStructure analyze(const BinomialSystem& sys, const AnalyzeOptions& options) {
  SnfResult snf = smith_normal_form(sys.exponents(), SnfOptions{false, options.workers});
  SolutionStructure s{false, 0, 0, 0, 0, std::move(snf), {}, {}};
  s.num_vars = sys.num_vars();
  s.rank = s.snf.rank;
  s.dimension = sys.num_vars() - s.rank;
  std::vector<double> log_modulus;
  ComplexVector phase;
  power_parts(sys.rhs(), s.snf.Q, log_modulus, phase);
  s.rhs_powers.resize(phase.size());
  for (std::size_t j = 0; j < phase.size(); ++j) {
    s.rhs_powers[j] = std::exp(log_modulus[j]) * phase[j];
  }

  s.consistent = true;
  const std::size_t m = sys.num_eqs();
  if (const auto& exact = sys.exact_rhs()) {
    for (std::size_t j = s.rank; j < m && s.consistent; ++j) {
      Rational prod = 1;
      for (std::size_t i = 0; i < m; ++i) {
        if (sgn(s.snf.Q(i, j)) != 0) prod *= rational_pow((*exact)[i], s.snf.Q(i, j));
      }
      s.consistent = (prod == 1);
    }
  } else {
    for (std::size_t j = s.rank; j < m; ++j) {
      if (std::abs(s.rhs_powers[j] - Complex(1.0)) > options.consistency_tolerance) {
        s.consistent = false;
        break;
      }
    }
  }

  s.zeta.reserve(s.rank);
  for (std::size_t j = 0; j < s.rank; ++j) {
    const double dj = s.snf.divisors[j].get_d();
    // std::arg lies in (-pi, pi], so the root's argument lies in (-pi/d, pi/d].
    s.zeta.push_back(std::polar(std::exp(log_modulus[j] / dj), std::arg(phase[j]) / dj));
  }

  s.component_count = 0;
  if (s.consistent) {
    s.component_count = 1;
    for (const auto& d : s.snf.divisors) s.component_count *= d;
    s.component_count = abs(s.component_count);
  }
  return s;
}

ComponentParametrization component_at(const SolutionStructure& structure,
                                      const std::vector<Integer>& indices) {
  if (!structure.consistent) {
    throw StateError("component_at: system is inconsistent, no components exist");
  }
  if (indices.size() != structure.rank) {
    throw DimensionError("component_at: expected " + std::to_string(structure.rank) +
                         " indices");
  }
  ComponentParametrization p{indices, structure.snf.P, {}};
  p.torsion_point.reserve(structure.rank);
  for (std::size_t j = 0; j < structure.rank; ++j) {
    const Integer& d = structure.snf.divisors[j];
    if (sgn(indices[j]) < 0 || indices[j] >= d) {
      throw DomainError("component_at: index out of range");
    }
    const double frac = Rational(indices[j], d).get_d();
    p.torsion_point.push_back(std::polar(1.0, 2.0 * std::numbers::pi * frac) *
                              structure.zeta[j]);
  }
  return p;
}

ComponentEnumerator::ComponentEnumerator(const SolutionStructure& structure)
    : structure_(&structure), counter_(structure.rank, Integer(0)) {
  if (!structure.consistent) {
    throw StateError("enumerate_components: system is inconsistent");
  }
}

std::optional<ComponentParametrization> ComponentEnumerator::next() {
  if (done_) return std::nullopt;
  ComponentParametrization out = component_at(*structure_, counter_);
  // Advance the mixed-radix counter, last index fastest.
  done_ = true;
  for (std::size_t j = counter_.size(); j-- > 0;) {
    counter_[j] += 1;
    if (counter_[j] < structure_->snf.divisors[j]) {
      done_ = false;
      break;
    }
    counter_[j] = 0;
  }
  return out;
}

std::vector<ComponentParametrization> enumerate_components(
    const SolutionStructure& structure) {
  std::vector<ComponentParametrization> out;
  ComponentEnumerator it(structure);
  while (auto p = it.next()) out.push_back(std::move(*p));
  return out;
}

ComplexVector evaluate_parametrization(const ComponentParametrization& p,
                                       const ComplexVector& t) {
  if (t.size() != p.dimension()) {
    throw DimensionError("evaluate_parametrization: expected " +
                         std::to_string(p.dimension()) + " parameters");
  }
  ComplexVector z = p.torsion_point;
  for (const auto& tj : t) {
    if (tj == Complex(0.0)) throw DomainError("evaluate_parametrization: zero parameter");
    z.push_back(tj);
  }
  return matrix_power(z, p.P);
}

double residual(const BinomialSystem& sys, const ComplexVector& x) {
  if (x.size() != sys.num_vars()) throw DimensionError("residual: length mismatch");
  for (const auto& xi : x) {
    if (xi == Complex(0.0)) throw DomainError("residual: zero coordinate");
  }
  const ComplexVector values = matrix_power(x, sys.exponents());
  double worst = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    worst = std::max(worst, std::abs(values[j] - sys.rhs()[j]));
  }
  return worst;
}

}  // namespace bintope
