#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

namespace bintope {

using Integer = mpz_class;
using Rational = mpq_class;

/// Dense matrix of arbitrary-precision integers, stored row-major.
///
/// Element access is bounds-checked only in debug builds. Both dimensions
/// are at least one; a zero dimension is rejected at construction.
class IntMatrix {
 public:
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix diagonal(const std::vector<Integer>& entries,
                            std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  const Integer& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  Integer& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }

  /// Rows [begin, end) as a new matrix.
  IntMatrix row_block(std::size_t begin, std::size_t end) const;
  /// Columns [begin, end) as a new matrix.
  IntMatrix col_block(std::size_t begin, std::size_t end) const;
  std::vector<Integer> column(std::size_t c) const;
  IntMatrix transpose() const;

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);

  bool is_zero() const;

  friend bool operator==(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Integer> data_;
};

/// Smith decomposition P * A * Q = diag(d_1..d_r) padded with zeros.
struct SnfResult {
  IntMatrix P;  // n x n, unimodular
  IntMatrix Q;  // m x m, unimodular
  std::vector<Integer> divisors;  // d_1..d_r, all positive
  std::size_t rank = 0;

  /// Top `rank` rows of P.
  IntMatrix P_r() const;
  /// Remaining n - rank rows of P; the lattice of the free directions.
  IntMatrix P_0() const;
  IntMatrix Q_r() const;
  IntMatrix Q_0() const;
  /// diag(divisors) as an n x m matrix.
  IntMatrix diagonal_form() const;
};

struct SnfOptions {
  /// Additionally enforce d_1 | d_2 | ... | d_r.
  bool enforce_divisibility = false;
  /// Row/column updates of a single reduction step are split across this
  /// many workers. The result does not depend on the value.
  unsigned workers = 1;
};

SnfResult smith_normal_form(const IntMatrix& A, const SnfOptions& options = {});

/// Fraction-free (Bareiss) determinant. Throws DimensionError if not square.
Integer det_exact(const IntMatrix& M);

bool unimodular_check(const IntMatrix& M);

/// Rank over the rationals, by fraction-free elimination.
std::size_t rank_exact(const IntMatrix& M);

/// Solves M x = rhs exactly for square nonsingular M.
/// Throws DimensionError on shape mismatch and DomainError if M is singular.
std::vector<Rational> solve_exact(const IntMatrix& M, const std::vector<Integer>& rhs);

/// Plain-text matrix format: a header line `rows cols`, then one line per
/// row of whitespace-separated signed decimal integers.
IntMatrix read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const IntMatrix& M);
std::string to_string(const IntMatrix& M);

}  // namespace bintope
