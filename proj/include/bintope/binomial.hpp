#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "bintope/intlinalg.hpp"

namespace bintope {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// The Laurent binomial system x^A = b over the complex torus.
///
/// Column j of `exponents` is alpha_j - beta_j for the j-th binomial
/// c1 x^alpha + c2 x^beta = 0, and b_j = -c2 / c1. When every coefficient
/// is rational the exact right-hand side is kept alongside the floating
/// one and the consistency test becomes exact.
class BinomialSystem {
 public:
  BinomialSystem(IntMatrix exponents, ComplexVector rhs);
  BinomialSystem(IntMatrix exponents, std::vector<Rational> exact_rhs);

  /// Builds the system from raw monomial pairs c1 x^alpha + c2 x^beta.
  struct Binomial {
    Complex c1;
    std::vector<long> alpha;
    Complex c2;
    std::vector<long> beta;
  };
  static BinomialSystem from_binomials(std::size_t num_vars,
                                       const std::vector<Binomial>& equations);

  std::size_t num_vars() const { return exponents_.rows(); }
  std::size_t num_eqs() const { return exponents_.cols(); }
  const IntMatrix& exponents() const { return exponents_; }
  const ComplexVector& rhs() const { return rhs_; }
  const std::optional<std::vector<Rational>>& exact_rhs() const { return exact_rhs_; }

 private:
  void validate() const;

  IntMatrix exponents_;
  ComplexVector rhs_;
  std::optional<std::vector<Rational>> exact_rhs_;
};

struct SolutionStructure {
  bool consistent = false;
  std::size_t num_vars = 0;
  std::size_t rank = 0;
  std::size_t dimension = 0;
  Integer component_count = 0;  // |d_1 ... d_r|, or 0 when inconsistent
  SnfResult snf;
  ComplexVector zeta;           // principal d_j-th root of (b^Q)_j, j < rank
  ComplexVector rhs_powers;     // b^Q
};

/// One connected component V_{k_1..k_r}, parametrized by
/// t -> (torsion_point, t)^P.
struct ComponentParametrization {
  std::vector<Integer> indices;  // k_j in [0, d_j)
  IntMatrix P;
  ComplexVector torsion_point;   // e^{2 pi i k_j / d_j} zeta_j

  std::size_t num_vars() const { return P.rows(); }
  std::size_t dimension() const { return P.rows() - torsion_point.size(); }
};

struct AnalyzeOptions {
  double consistency_tolerance = 1e-8;
  unsigned workers = 1;
};

SolutionStructure analyze(const BinomialSystem& sys, const AnalyzeOptions& options = {});

/// Component for an explicit index tuple. Throws StateError on an
/// inconsistent structure and DomainError if an index is out of range.
ComponentParametrization component_at(const SolutionStructure& structure,
                                      const std::vector<Integer>& indices);

/// Streams every component in mixed-radix order of the index tuple
/// (last index fastest).
class ComponentEnumerator {
 public:
  explicit ComponentEnumerator(const SolutionStructure& structure);

  std::optional<ComponentParametrization> next();

 private:
  const SolutionStructure* structure_;
  std::vector<Integer> counter_;
  bool done_ = false;
};

std::vector<ComponentParametrization> enumerate_components(
    const SolutionStructure& structure);

/// x = (torsion_point, t)^P. Throws DomainError if a t_j is zero and
/// DimensionError if t has the wrong length.
ComplexVector evaluate_parametrization(const ComponentParametrization& p,
                                       const ComplexVector& t);

/// max_j |x^{A_j} - b_j|.
double residual(const BinomialSystem& sys, const ComplexVector& x);

/// z^e for a nonzero complex z. Uses repeated squaring for |e| <= 16 and
/// the log-polar form beyond.
Complex complex_pow(Complex z, const Integer& e);
Complex complex_pow(Complex z, long e);

/// x^M: the j-th entry is prod_i x_i^{M_ij}.
ComplexVector matrix_power(const ComplexVector& x, const IntMatrix& M);

}  // namespace bintope
