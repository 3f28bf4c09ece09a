#pragma once

#include <algorithm>
#include <iterator>
#include <optional>
#include <random>
#include <vector>

#include "bintope/intlinalg.hpp"

namespace oracle {

using bintope::Integer;
using bintope::IntMatrix;
using bintope::Rational;

// Laplace expansion along the first row.
inline Integer cofactor_det(const IntMatrix& M) {
  const std::size_t n = M.rows();
  if (n == 1) return M(0, 0);
  Integer total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (sgn(M(0, c)) == 0) continue;
    IntMatrix minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r) {
      std::size_t cc = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == c) continue;
        minor(r - 1, cc++) = M(r, k);
      }
    }
    Integer term = M(0, c) * cofactor_det(minor);
    total += (c % 2 == 0) ? term : Integer(-term);
  }
  return total;
}

// Gaussian elimination over Q with plain rational arithmetic.
inline std::size_t rational_rank(const IntMatrix& M) {
  std::vector<std::vector<Rational>> a(M.rows(), std::vector<Rational>(M.cols()));
  for (std::size_t r = 0; r < M.rows(); ++r)
    for (std::size_t c = 0; c < M.cols(); ++c) a[r][c] = M(r, c);
  std::size_t rank = 0;
  for (std::size_t c = 0; c < M.cols() && rank < M.rows(); ++c) {
    std::size_t p = rank;
    while (p < M.rows() && sgn(a[p][c]) == 0) ++p;
    if (p == M.rows()) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t r = rank + 1; r < M.rows(); ++r) {
      if (sgn(a[r][c]) == 0) continue;
      Rational f = a[r][c] / a[rank][c];
      for (std::size_t k = c; k < M.cols(); ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                               long lo, long hi) {
  std::uniform_int_distribution<long> dist(lo, hi);
  IntMatrix M(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) M(r, c) = dist(rng);
  return M;
}

// Fraction-free elimination with row pivoting; every division is exact.
inline Integer fraction_free_det(IntMatrix M) {
  const std::size_t n = M.rows();
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && sgn(M(p, k)) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(M(p, c), M(k, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = M(i, j) * M(k, k) - M(i, k) * M(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        M(i, j) = v;
      }
      M(i, k) = 0;
    }
    prev = M(k, k);
  }
  return sign * M(n - 1, n - 1);
}

inline IntMatrix product(const IntMatrix& A, const IntMatrix& B) {
  IntMatrix C(A.rows(), B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t k = 0; k < A.cols(); ++k) {
      if (sgn(A(i, k)) == 0) continue;
      for (std::size_t j = 0; j < B.cols(); ++j) C(i, j) += A(i, k) * B(k, j);
    }
  return C;
}

// Random matrix of prescribed rank: product of random rows x rank and rank x cols.
inline IntMatrix random_rank_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                                    std::size_t rank) {
  return random_matrix(rng, rows, rank, -3, 3) * random_matrix(rng, rank, cols, -3, 3);
}

// Gauss-Jordan over Q; nullopt when M is singular.
inline std::optional<std::vector<Rational>> rational_solve(std::vector<std::vector<Rational>> M,
                                                           std::vector<Rational> b) {
  const std::size_t n = M.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(M[p][c]) == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(M[p], M[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || sgn(M[r][c]) == 0) continue;
      Rational f = M[r][c] / M[c][c];
      for (std::size_t k = c; k < n; ++k) M[r][k] -= f * M[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= M[i][i];
  return b;
}

using Points = std::vector<std::vector<long>>;

// (alpha, beta) with <a, alpha> + w(a) = beta on the given points.
inline std::optional<std::vector<Rational>> lifted_hyperplane(const Points& pts,
                                                             const std::vector<long>& lift,
                                                             const std::vector<std::size_t>& idx) {
  const std::size_t d = pts[0].size();
  std::vector<std::vector<Rational>> M(idx.size(), std::vector<Rational>(d + 1));
  std::vector<Rational> b(idx.size());
  for (std::size_t p = 0; p < idx.size(); ++p) {
    for (std::size_t k = 0; k < d; ++k) M[p][k] = pts[idx[p]][k];
    M[p][d] = -1;
    b[p] = -lift[idx[p]];
  }
  return rational_solve(M, b);
}

inline Rational lifted_slack(const Points& pts, const std::vector<long>& lift, std::size_t i,
                             const std::vector<Rational>& x) {
  const std::size_t d = pts[0].size();
  Rational h = lift[i];
  for (std::size_t k = 0; k < d; ++k) h += pts[i][k] * x[k];
  return h - x[d];
}

struct BruteCells {
  std::vector<std::vector<std::size_t>> cells;
  bool degenerate = false;
};

template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  for (;;) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == i - 1 + n - k) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Every (d+1)-subset whose lifted hyperplane has all other points strictly
// above it. A subset with all others weakly above and one on it marks the
// lifting degenerate.
inline BruteCells brute_force_cells(const Points& pts, const std::vector<long>& lift) {
  BruteCells out;
  const std::size_t d = pts[0].size();
  for_each_subset(pts.size(), d + 1, [&](const std::vector<std::size_t>& idx) {
    auto x = lifted_hyperplane(pts, lift, idx);
    if (!x) return;
    bool below = false, touching = false;
    for (std::size_t i = 0; i < pts.size() && !below; ++i) {
      if (std::find(idx.begin(), idx.end(), i) != idx.end()) continue;
      int s = sgn(lifted_slack(pts, lift, i, *x));
      if (s < 0) below = true;
      if (s == 0) touching = true;
    }
    if (below) return;
    if (touching) {
      out.degenerate = true;
    } else {
      out.cells.push_back(idx);
    }
  });
  return out;
}

inline bool is_subset(const std::vector<std::size_t>& small, const std::vector<std::size_t>& big) {
  for (auto v : small) {
    if (std::find(big.begin(), big.end(), v) == big.end()) return false;
  }
  return true;
}

inline bool is_lower_face(const BruteCells& bc, const std::vector<std::size_t>& node) {
  for (const auto& c : bc.cells) {
    if (is_subset(node, c)) return true;
  }
  return false;
}

// Random point set of full affine dimension with distinct points; n is
// capped at the number of lattice points in the box.
inline Points random_points(std::mt19937_64& rng, std::size_t d, std::size_t n, long lo,
                            long hi) {
  std::size_t box = 1;
  for (std::size_t k = 0; k < d && box < n; ++k) box *= static_cast<std::size_t>(hi - lo + 1);
  n = std::min(n, box);
  std::uniform_int_distribution<long> dist(lo, hi);
  for (;;) {
    Points pts;
    while (pts.size() < n) {
      std::vector<long> p(d);
      for (auto& v : p) v = dist(rng);
      if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
    }
    IntMatrix M(n, d + 1);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < d; ++k) M(i, k) = pts[i][k];
      M(i, d) = 1;
    }
    if (rational_rank(M) == d + 1) return pts;
  }
}

inline std::vector<long> random_lifting(std::mt19937_64& rng, std::size_t n, long hi) {
  std::uniform_int_distribution<long> dist(0, hi);
  std::vector<long> w(n);
  for (auto& v : w) v = dist(rng);
  return w;
}

inline std::size_t affine_dim(const Points& pts, const std::vector<std::size_t>& idx) {
  if (idx.size() <= 1) return 0;
  const std::size_t d = pts[0].size();
  IntMatrix M(idx.size() - 1, d);
  for (std::size_t r = 1; r < idx.size(); ++r)
    for (std::size_t k = 0; k < d; ++k) M(r - 1, k) = pts[idx[r]][k] - pts[idx[0]][k];
  return rational_rank(M);
}

// Point sets of the facets of conv(pts): every affinely independent
// d-subset spans a hyperplane (normal from signed cofactors); it supports a
// facet when all points lie on one side.
inline std::vector<std::vector<std::size_t>> hull_facets(const Points& pts) {
  const std::size_t d = pts[0].size();
  std::vector<std::vector<std::size_t>> facets;
  for_each_subset(pts.size(), d, [&](const std::vector<std::size_t>& idx) {
    std::vector<Integer> normal(d);
    if (d == 1) {
      normal[0] = 1;
    } else {
      for (std::size_t k = 0; k < d; ++k) {
        IntMatrix M(d - 1, d - 1);
        for (std::size_t r = 1; r < d; ++r) {
          std::size_t cc = 0;
          for (std::size_t c = 0; c < d; ++c) {
            if (c == k) continue;
            M(r - 1, cc++) = pts[idx[r]][c] - pts[idx[0]][c];
          }
        }
        normal[k] = (k % 2 == 0) ? cofactor_det(M) : Integer(-cofactor_det(M));
      }
    }
    bool nonzero = false;
    for (const auto& v : normal) nonzero = nonzero || sgn(v) != 0;
    if (!nonzero) return;
    bool pos = false, neg = false;
    std::vector<std::size_t> on;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      Integer v = 0;
      for (std::size_t k = 0; k < d; ++k) v += normal[k] * (pts[i][k] - pts[idx[0]][k]);
      if (sgn(v) > 0) pos = true;
      if (sgn(v) < 0) neg = true;
      if (sgn(v) == 0) on.push_back(i);
    }
    if (pos && neg) return;
    if (std::find(facets.begin(), facets.end(), on) == facets.end()) facets.push_back(on);
  });
  return facets;
}

inline std::vector<std::size_t> intersect(const std::vector<std::size_t>& a,
                                          const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Pulling triangulation: cone from the first point of the face over each of
// its facets not containing that point. Facets of a face F are the sets
// F & G over hull facets G with one dimension less.
inline void pulling(const Points& pts, const std::vector<std::vector<std::size_t>>& hull,
                    const std::vector<std::size_t>& face, std::size_t dim,
                    std::vector<std::size_t>& prefix,
                    std::vector<std::vector<std::size_t>>& out) {
  const std::size_t apex = face[0];
  if (dim == 0) {
    prefix.push_back(apex);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  std::vector<std::vector<std::size_t>> subfaces;
  for (const auto& g : hull) {
    auto r = intersect(face, g);
    if (r.empty() || r.size() == face.size()) continue;
    if (std::binary_search(r.begin(), r.end(), apex)) continue;
    if (affine_dim(pts, r) + 1 != dim) continue;
    if (std::find(subfaces.begin(), subfaces.end(), r) == subfaces.end()) subfaces.push_back(r);
  }
  prefix.push_back(apex);
  for (const auto& r : subfaces) pulling(pts, hull, r, dim - 1, prefix, out);
  prefix.pop_back();
}

// d! Vol(conv pts), exactly, for points of full affine dimension.
inline Integer normalized_volume(const Points& pts) {
  const std::size_t d = pts[0].size();
  if (d == 1) {
    long lo = pts[0][0], hi = pts[0][0];
    for (const auto& p : pts) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    return hi - lo;
  }
  auto hull = hull_facets(pts);
  std::vector<std::size_t> all(pts.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<std::vector<std::size_t>> simplices;
  std::vector<std::size_t> prefix;
  pulling(pts, hull, all, d, prefix, simplices);
  Integer total = 0;
  for (const auto& s : simplices) {
    IntMatrix E(d, d);
    for (std::size_t r = 1; r <= d; ++r)
      for (std::size_t k = 0; k < d; ++k) E(r - 1, k) = pts[s[r]][k] - pts[s[0]][k];
    total += abs(cofactor_det(E));
  }
  return total;
}

}  // namespace oracle
