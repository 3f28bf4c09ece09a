#include "bintope/intlinalg.hpp"

#include <algorithm>
#include <cassert>
#include <istream>
#include <ostream>
#include <sstream>
#include <utility>

#include "bintope/errors.hpp"
#include "bintope/parallel.hpp"

namespace bintope {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) {
    throw DimensionError("IntMatrix: dimensions must be at least 1x1");
  }
  data_.resize(rows * cols);
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : IntMatrix(rows.size(), rows.size() == 0 ? 0 : rows.begin()->size()) {
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionError("IntMatrix: ragged initializer");
    std::size_t c = 0;
    for (long v : row) (*this)(r, c++) = v;
    ++r;
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = 1;
  return I;
}

IntMatrix IntMatrix::diagonal(const std::vector<Integer>& entries, std::size_t rows,
                              std::size_t cols) {
  IntMatrix D(rows, cols);
  if (entries.size() > std::min(rows, cols)) {
    throw DimensionError("IntMatrix::diagonal: too many entries");
  }
  for (std::size_t i = 0; i < entries.size(); ++i) D(i, i) = entries[i];
  return D;
}

IntMatrix IntMatrix::row_block(std::size_t begin, std::size_t end) const {
  assert(begin < end && end <= rows_);
  IntMatrix out(end - begin, cols_);
  std::copy(data_.begin() + begin * cols_, data_.begin() + end * cols_,
            out.data_.begin());
  return out;
}

IntMatrix IntMatrix::col_block(std::size_t begin, std::size_t end) const {
  assert(begin < end && end <= cols_);
  IntMatrix out(rows_, end - begin);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = begin; c < end; ++c) out(r, c - begin) = (*this)(r, c);
  return out;
}

std::vector<Integer> IntMatrix::column(std::size_t c) const {
  std::vector<Integer> col(rows_);
  for (std::size_t r = 0; r < rows_; ++r) col[r] = (*this)(r, c);
  return col;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix T(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) T(c, r) = (*this)(r, c);
  return T;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Integer& v) { return sgn(v) == 0; });
}

bool operator==(const IntMatrix& a, const IntMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("IntMatrix: product shape mismatch");
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Integer& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (sgn(b(k, j)) != 0) out(i, j) += aik * b(k, j);
      }
    }
  }
  return out;
}

IntMatrix SnfResult::P_r() const { return P.row_block(0, rank); }
IntMatrix SnfResult::P_0() const { return P.row_block(rank, P.rows()); }
IntMatrix SnfResult::Q_r() const { return Q.col_block(0, rank); }
IntMatrix SnfResult::Q_0() const { return Q.col_block(rank, Q.cols()); }

IntMatrix SnfResult::diagonal_form() const {
  return IntMatrix::diagonal(divisors, P.rows(), Q.rows());
}

namespace {

// Quotient rounded to nearest, so the remainder satisfies 2|r| <= |p|.
Integer nearest_quotient(const Integer& a, const Integer& p) {
  Integer q;
  mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
  Integer r = a - q * p;
  Integer twice = 2 * abs(r);
  if (twice > abs(p)) {
    q += sgn(r) * sgn(p);
  }
  return q;
}

// Working state of the reduction. Row operations act on W and P, column
// operations on W and Q.
class SmithReducer {
 public:
  SmithReducer(const IntMatrix& A, unsigned workers)
      : W_(A),
        P_(IntMatrix::identity(A.rows())),
        Q_(IntMatrix::identity(A.cols())),
        workers_(workers) {}

  SnfResult run(bool enforce_divisibility) {
    const std::size_t n = W_.rows();
    const std::size_t m = W_.cols();
    std::size_t t = 0;
    for (; t < std::min(n, m); ++t) {
      if (!move_min_to(t)) break;
      clear_cross(t);
      if (sgn(W_(t, t)) < 0) negate_row(t);
    }
    SnfResult out{P_, Q_, {}, t};
    out.divisors.reserve(t);
    for (std::size_t i = 0; i < t; ++i) out.divisors.push_back(W_(i, i));
    if (enforce_divisibility) make_chain(out);
    return out;
  }

 private:
  bool large() const { return W_.rows() * W_.cols() >= 4096 && workers_ > 1; }

  // Moves the smallest nonzero entry of W[t.., t..] to (t, t).
  bool move_min_to(std::size_t t) {
    std::size_t bi = 0, bj = 0;
    const Integer* best = nullptr;
    for (std::size_t i = t; i < W_.rows(); ++i) {
      for (std::size_t j = t; j < W_.cols(); ++j) {
        const Integer& v = W_(i, j);
        if (sgn(v) == 0) continue;
        if (best == nullptr || mpz_cmpabs(v.get_mpz_t(), best->get_mpz_t()) < 0) {
          best = &v;
          bi = i;
          bj = j;
        }
      }
    }
    if (best == nullptr) return false;
    swap_rows(t, bi);
    swap_cols(t, bj);
    return true;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    W_.swap_rows(a, b);
    P_.swap_rows(a, b);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    W_.swap_cols(a, b);
    Q_.swap_cols(a, b);
  }
  void negate_row(std::size_t t) {
    for (std::size_t c = 0; c < W_.cols(); ++c) W_(t, c) = -W_(t, c);
    for (std::size_t c = 0; c < P_.cols(); ++c) P_(t, c) = -P_(t, c);
  }

  // Zeroes row t and column t outside the pivot by repeated division steps.
  void clear_cross(std::size_t t) {
    for (;;) {
      reduce_column(t);
      reduce_row(t);
      bool clean = true;
      std::size_t bi = t, bj = t;
      const Integer* best = &W_(t, t);
      for (std::size_t i = t + 1; i < W_.rows(); ++i) {
        if (sgn(W_(i, t)) != 0) {
          clean = false;
          if (mpz_cmpabs(W_(i, t).get_mpz_t(), best->get_mpz_t()) < 0) {
            best = &W_(i, t);
            bi = i;
            bj = t;
          }
        }
      }
      for (std::size_t j = t + 1; j < W_.cols(); ++j) {
        if (sgn(W_(t, j)) != 0) {
          clean = false;
          if (mpz_cmpabs(W_(t, j).get_mpz_t(), best->get_mpz_t()) < 0) {
            best = &W_(t, j);
            bi = t;
            bj = j;
          }
        }
      }
      if (clean) return;
      swap_rows(t, bi);
      swap_cols(t, bj);
    }
  }

  // row_i -= q_i * row_t for every i > t.
  void reduce_column(std::size_t t) {
    const std::size_t n = W_.rows();
    std::vector<Integer> q(n);
    bool any = false;
    for (std::size_t i = t + 1; i < n; ++i) {
      if (sgn(W_(i, t)) == 0) continue;
      q[i] = nearest_quotient(W_(i, t), W_(t, t));
      any = any || sgn(q[i]) != 0;
    }
    if (!any) return;
    std::vector<std::size_t> wcols, pcols;
    for (std::size_t c = t; c < W_.cols(); ++c)
      if (sgn(W_(t, c)) != 0) wcols.push_back(c);
    for (std::size_t c = 0; c < P_.cols(); ++c)
      if (sgn(P_(t, c)) != 0) pcols.push_back(c);
    auto update = [&](std::size_t begin, std::size_t end) {
      Integer tmp;
      for (std::size_t i = std::max(begin, t + 1); i < end; ++i) {
        if (sgn(q[i]) == 0) continue;
        for (std::size_t c : wcols) {
          tmp = q[i] * W_(t, c);
          W_(i, c) -= tmp;
        }
        for (std::size_t c : pcols) {
          tmp = q[i] * P_(t, c);
          P_(i, c) -= tmp;
        }
      }
    };
    if (large()) {
      parallel_blocks(n, workers_, update);
    } else {
      update(0, n);
    }
  }

  // col_j -= q_j * col_t for every j > t.
  void reduce_row(std::size_t t) {
    const std::size_t m = W_.cols();
    std::vector<Integer> q(m);
    std::vector<std::size_t> targets;
    for (std::size_t j = t + 1; j < m; ++j) {
      if (sgn(W_(t, j)) == 0) continue;
      q[j] = nearest_quotient(W_(t, j), W_(t, t));
      if (sgn(q[j]) != 0) targets.push_back(j);
    }
    if (targets.empty()) return;
    auto update_w = [&](std::size_t begin, std::size_t end) {
      Integer tmp;
      for (std::size_t r = std::max(begin, t); r < end; ++r) {
        if (sgn(W_(r, t)) == 0) continue;
        for (std::size_t j : targets) {
          tmp = q[j] * W_(r, t);
          W_(r, j) -= tmp;
        }
      }
    };
    auto update_q = [&](std::size_t begin, std::size_t end) {
      Integer tmp;
      for (std::size_t r = begin; r < end; ++r) {
        if (sgn(Q_(r, t)) == 0) continue;
        for (std::size_t j : targets) {
          tmp = q[j] * Q_(r, t);
          Q_(r, j) -= tmp;
        }
      }
    };
    if (large()) {
      parallel_blocks(W_.rows(), workers_, update_w);
      parallel_blocks(Q_.rows(), workers_, update_q);
    } else {
      update_w(0, W_.rows());
      update_q(0, Q_.rows());
    }
  }

  // Replaces diag(a, b) at positions (i, j) by diag(gcd, lcm) using
  // unimodular 2x2 transforms on rows i, j of P and columns i, j of Q.
  void make_chain(SnfResult& out) {
    auto& d = out.divisors;
    for (std::size_t i = 0; i < d.size(); ++i) {
      for (std::size_t j = i + 1; j < d.size(); ++j) {
        if (mpz_divisible_p(d[j].get_mpz_t(), d[i].get_mpz_t())) continue;
        Integer g, s, u;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), u.get_mpz_t(), d[i].get_mpz_t(),
                   d[j].get_mpz_t());
        const Integer ai = d[i] / g;
        const Integer bj = d[j] / g;
        IntMatrix& P = out.P;
        for (std::size_t c = 0; c < P.cols(); ++c) {
          Integer ri = s * P(i, c) + u * P(j, c);
          Integer rj = -bj * P(i, c) + ai * P(j, c);
          P(i, c) = std::move(ri);
          P(j, c) = std::move(rj);
        }
        IntMatrix& Q = out.Q;
        for (std::size_t r = 0; r < Q.rows(); ++r) {
          Integer ci = Q(r, i) + Q(r, j);
          Integer cj = -u * bj * Q(r, i) + s * ai * Q(r, j);
          Q(r, i) = std::move(ci);
          Q(r, j) = std::move(cj);
        }
        d[j] = d[i] * bj;  // lcm
        d[i] = g;
      }
    }
  }

  IntMatrix W_;
  IntMatrix P_;
  IntMatrix Q_;
  unsigned workers_;
};

// In-place fraction-free elimination. Returns the rank; `sign` tracks row
// swaps, and on a square full-rank input the last pivot is the determinant.
std::size_t bareiss(IntMatrix& M, int& sign) {
  const std::size_t n = M.rows();
  const std::size_t m = M.cols();
  sign = 1;
  Integer prev = 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m && row < n; ++col) {
    std::size_t piv = row;
    while (piv < n && sgn(M(piv, col)) == 0) ++piv;
    if (piv == n) continue;
    if (piv != row) {
      M.swap_rows(piv, row);
      sign = -sign;
    }
    for (std::size_t i = row + 1; i < n; ++i) {
      for (std::size_t j = col + 1; j < m; ++j) {
        Integer v = M(row, col) * M(i, j) - M(i, col) * M(row, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        M(i, j) = std::move(v);
      }
      M(i, col) = 0;
    }
    prev = M(row, col);
    ++row;
  }
  return row;
}

}  // namespace

SnfResult smith_normal_form(const IntMatrix& A, const SnfOptions& options) {
  SmithReducer reducer(A, std::max(1u, options.workers));
  return reducer.run(options.enforce_divisibility);
}

Integer det_exact(const IntMatrix& M) {
  if (!M.square()) throw DimensionError("det_exact: matrix is not square");
  IntMatrix work = M;
  int sign = 1;
  const std::size_t rank = bareiss(work, sign);
  if (rank < M.rows()) return 0;
  Integer det = work(M.rows() - 1, M.cols() - 1);
  return sign < 0 ? Integer(-det) : det;
}

bool unimodular_check(const IntMatrix& M) {
  return abs(det_exact(M)) == 1;
}

std::size_t rank_exact(const IntMatrix& M) {
  IntMatrix work = M;
  int sign = 1;
  return bareiss(work, sign);
}

std::vector<Rational> solve_exact(const IntMatrix& M, const std::vector<Integer>& rhs) {
  if (!M.square() || rhs.size() != M.rows()) {
    throw DimensionError("solve_exact: shape mismatch");
  }
  const std::size_t n = M.rows();
  IntMatrix aug(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = M(i, j);
    aug(i, n) = rhs[i];
  }
  int sign = 1;
  bareiss(aug, sign);
  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(aug(i, i)) == 0) throw DomainError("solve_exact: singular matrix");
  }
  std::vector<Rational> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    Rational acc(aug(ii, n));
    for (std::size_t j = ii + 1; j < n; ++j) acc -= Rational(aug(ii, j)) * x[j];
    acc /= Rational(aug(ii, ii));
    x[ii] = std::move(acc);
  }
  return x;
}

IntMatrix read_matrix(std::istream& in) {
  long long rows = 0, cols = 0;
  if (!(in >> rows >> cols)) throw ParseError("matrix: missing `rows cols` header");
  if (rows <= 0 || cols <= 0) throw ParseError("matrix: dimensions must be positive");
  IntMatrix M(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  std::string token;
  for (long long r = 0; r < rows; ++r) {
    for (long long c = 0; c < cols; ++c) {
      if (!(in >> token)) throw ParseError("matrix: too few entries");
      Integer v;
      if (v.set_str(token, 10) != 0) throw ParseError("matrix: bad integer '" + token + "'");
      M(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = std::move(v);
    }
  }
  if (in >> token) throw ParseError("matrix: trailing data '" + token + "'");
  return M;
}

void write_matrix(std::ostream& out, const IntMatrix& M) {
  out << M.rows() << ' ' << M.cols() << '\n';
  for (std::size_t r = 0; r < M.rows(); ++r) {
    for (std::size_t c = 0; c < M.cols(); ++c) {
      if (c) out << ' ';
      out << M(r, c).get_str();
    }
    out << '\n';
  }
}

std::string to_string(const IntMatrix& M) {
  std::ostringstream os;
  write_matrix(os, M);
  return os.str();
}

}  // namespace bintope
