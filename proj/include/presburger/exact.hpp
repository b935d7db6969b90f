#pragma once

// Exact integer/rational arithmetic, small dense matrices, Hermite normal
// form, full-rank lattices and lattice cosets.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace presburger {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (formulas, serialized objects).
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  explicit ParseError(const std::string& what) : Error(what), position_(0) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

/// Well-formed input that violates an operation's precondition.
class SemanticError : public Error {
public:
  using Error::Error;
};

/// A specialization or cardinality that does not converge.
class DivergenceError : public SemanticError {
public:
  using SemanticError::SemanticError;
};

/// Request outside the implemented scope.
class UnsupportedError : public Error {
public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Scalars

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int lcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

/// floor(a / b), b != 0.
inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

/// ceil(a / b), b != 0.
inline Int ceil_div(const Int& a, const Int& b) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

/// Residue of a modulo m in [0, m), m > 0.
inline Int mod(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline bool divides(const Int& d, const Int& a) {
  return mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t()) != 0;
}

inline Int floor(const Rat& q) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Int ceil(const Rat& q) {
  Int r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline Rat make_rat(const Int& num, const Int& den = 1) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

/// Generalized binomial coefficient C(n, k) for any integer n and k >= 0.
inline Rat binomial(const Int& n, long k) {
  Rat r = 1;
  for (long i = 0; i < k; ++i) {
    r *= Rat(n - i);
    r /= Rat(i + 1);
  }
  return r;
}

inline std::string to_string(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// ---------------------------------------------------------------------------
// Vectors

inline IntVec zero_vec(std::size_t n) { return IntVec(n, Int(0)); }

inline bool is_zero(std::span<const Int> v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

inline bool is_zero(std::span<const Rat> v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

inline Int dot(std::span<const Int> a, std::span<const Int> b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rat dot(std::span<const Int> a, std::span<const Rat> b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Rat(a[i]) * b[i];
  return s;
}

inline Rat dot(std::span<const Rat> a, std::span<const Rat> b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline IntVec add(const IntVec& a, const IntVec& b) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline IntVec sub(const IntVec& a, const IntVec& b) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline IntVec scale(const IntVec& a, const Int& k) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * k;
  return r;
}

inline IntVec negate(const IntVec& a) { return scale(a, Int(-1)); }

inline Int content(std::span<const Int> v) {
  Int g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

/// Divides out the gcd of the entries; zero stays zero.
inline IntVec primitive(const IntVec& v) {
  Int g = content(v);
  if (g == 0 || g == 1) return v;
  IntVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] / g;
  return r;
}

/// First nonzero entry is positive.
inline bool lex_positive(std::span<const Int> v) {
  for (const auto& x : v) {
    if (x != 0) return x > 0;
  }
  return false;
}

/// Smallest integer multiple of a rational vector that is integral and primitive
/// (direction preserved).
inline IntVec primitive_direction(const RatVec& v) {
  Int den = 1;
  for (const auto& x : v) den = lcm(den, x.get_den());
  IntVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rat s = v[i] * Rat(den);
    r[i] = s.get_num();
  }
  return primitive(r);
}

inline RatVec to_rat(const IntVec& v) { return RatVec(v.begin(), v.end()); }

inline std::string to_string(std::span<const Int> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].get_str();
  }
  return s + ")";
}

inline std::string to_string(std::span<const Rat> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += to_string(v[i]);
  }
  return s + ")";
}

// ---------------------------------------------------------------------------
// Dense integer matrix, row-major.

class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Int(0)) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_columns(std::size_t rows, const std::vector<IntVec>& cols) {
    IntMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw std::invalid_argument("column dimension mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  static IntMatrix from_rows(std::size_t cols, const std::vector<IntVec>& rows) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw std::invalid_argument("row dimension mismatch");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntVec column(std::size_t j) const {
    IntVec c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  IntVec row(std::size_t i) const {
    return IntVec(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  IntVec apply(const IntVec& x) const {
    IntVec y(rows_, Int(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  IntMatrix operator*(const IntMatrix& o) const {
    IntMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        if ((*this)(i, k) == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += (*this)(i, k) * o(k, j);
      }
    return r;
  }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  void swap_columns(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

  /// column[dst] -= k * column[src]
  void sub_column(std::size_t dst, std::size_t src, const Int& k) {
    if (k == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) -= k * (*this)(i, src);
  }

  void negate_column(std::size_t j) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = -(*this)(i, j);
  }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Int> data_;
};

/// Determinant of a square integer matrix (fraction-free Bareiss elimination).
inline Int determinant(IntMatrix m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

// ---------------------------------------------------------------------------
// Hermite normal form

struct HnfResult {
  IntMatrix H;  ///< H = M * U, column echelon form
  IntMatrix U;  ///< unimodular
  std::vector<std::size_t> pivot_rows;  ///< pivot row of column j, for j < rank
  std::size_t rank() const { return pivot_rows.size(); }
};

/// Column-style Hermite normal form. Columns 0..rank-1 of H carry the pivots
/// (positive, in increasing rows); entries left of a pivot lie in [0, pivot);
/// entries above a pivot and all columns past rank are zero. For a square
/// nonsingular M this is lower triangular with |det H| = |det M|.
inline HnfResult hnf(const IntMatrix& M) {
  HnfResult r{M, IntMatrix::identity(M.cols()), {}};
  IntMatrix& H = r.H;
  IntMatrix& U = r.U;
  const std::size_t n = M.cols();
  std::size_t piv = 0;
  for (std::size_t i = 0; i < M.rows() && piv < n; ++i) {
    while (true) {
      std::size_t best = n;
      for (std::size_t j = piv; j < n; ++j) {
        if (H(i, j) == 0) continue;
        if (best == n || abs(H(i, j)) < abs(H(i, best))) best = j;
      }
      if (best == n) break;
      H.swap_columns(piv, best);
      U.swap_columns(piv, best);
      bool done = true;
      for (std::size_t j = piv + 1; j < n; ++j) {
        if (H(i, j) == 0) continue;
        Int q = floor_div(H(i, j), H(i, piv));
        H.sub_column(j, piv, q);
        U.sub_column(j, piv, q);
        if (H(i, j) != 0) done = false;
      }
      if (done) break;
    }
    if (H(i, piv) == 0) continue;
    if (H(i, piv) < 0) {
      H.negate_column(piv);
      U.negate_column(piv);
    }
    for (std::size_t j = 0; j < piv; ++j) {
      Int q = floor_div(H(i, j), H(i, piv));
      H.sub_column(j, piv, q);
      U.sub_column(j, piv, q);
    }
    r.pivot_rows.push_back(i);
    ++piv;
  }
  return r;
}

/// Integer solutions of A x = b: x = particular + Z-span(kernel).
struct IntegerSolution {
  IntVec particular;
  std::vector<IntVec> kernel;
};

inline std::optional<IntegerSolution> solve_integer(const IntMatrix& A, const IntVec& b) {
  if (b.size() != A.rows()) throw std::invalid_argument("solve_integer: dimension mismatch");
  HnfResult h = hnf(A);
  const std::size_t n = A.cols();
  IntVec y(n, Int(0));
  std::size_t piv = 0;
  for (std::size_t i = 0; i < A.rows(); ++i) {
    Int rest = b[i];
    for (std::size_t k = 0; k < piv; ++k) rest -= h.H(i, k) * y[k];
    if (piv < h.rank() && h.pivot_rows[piv] == i) {
      if (!divides(h.H(i, piv), rest)) return std::nullopt;
      y[piv] = rest / h.H(i, piv);
      ++piv;
    } else if (rest != 0) {
      return std::nullopt;
    }
  }
  IntegerSolution s{h.U.apply(y), {}};
  for (std::size_t j = h.rank(); j < n; ++j) s.kernel.push_back(h.U.column(j));
  return s;
}

// ---------------------------------------------------------------------------
// Rational linear algebra (Gaussian elimination)

namespace detail {

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(std::vector<RatVec>& rows, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    Rat inv = 1 / rows[r][c];
    for (auto& x : rows[r]) x *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Rat f = rows[i][c];
      for (std::size_t j = c; j < rows[i].size(); ++j) rows[i][j] -= f * rows[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace detail

inline std::size_t rank(const std::vector<IntVec>& rows, std::size_t cols) {
  std::vector<RatVec> m;
  m.reserve(rows.size());
  for (const auto& r : rows) m.push_back(to_rat(r));
  return detail::rref(m, cols).size();
}

/// Primitive integer basis of {y : row . y = 0 for all rows}.
inline std::vector<IntVec> nullspace(const std::vector<IntVec>& rows, std::size_t cols) {
  std::vector<RatVec> m;
  for (const auto& r : rows) m.push_back(to_rat(r));
  auto piv = detail::rref(m, cols);
  std::vector<bool> is_piv(cols, false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<IntVec> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_piv[f]) continue;
    RatVec v(cols, Rat(0));
    v[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m[i][f];
    basis.push_back(primitive_direction(v));
  }
  return basis;
}

/// Some rational solution of A x = b (free variables zero), if consistent.
inline std::optional<RatVec> solve_rational(const std::vector<IntVec>& A, const RatVec& b, std::size_t cols) {
  std::vector<RatVec> m;
  for (std::size_t i = 0; i < A.size(); ++i) {
    RatVec row = to_rat(A[i]);
    row.push_back(b[i]);
    m.push_back(std::move(row));
  }
  auto piv = detail::rref(m, cols + 1);
  if (!piv.empty() && piv.back() == cols) return std::nullopt;
  RatVec x(cols, Rat(0));
  for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = m[i][cols];
  return x;
}

/// Inverse of a nonsingular square rational matrix given by integer rows.
inline std::vector<RatVec> inverse(const std::vector<IntVec>& A) {
  const std::size_t n = A.size();
  std::vector<RatVec> m;
  for (std::size_t i = 0; i < n; ++i) {
    RatVec row = to_rat(A[i]);
    row.resize(2 * n, Rat(0));
    row[n + i] = 1;
    m.push_back(std::move(row));
  }
  auto piv = detail::rref(m, n);
  if (piv.size() != n) throw std::invalid_argument("inverse: singular matrix");
  std::vector<RatVec> inv(n, RatVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = m[i][n + j];
  return inv;
}

// ---------------------------------------------------------------------------
// Lattices

/// Full-rank sublattice of Z^d in canonical column HNF.
class Lattice {
public:
  /// Z^d.
  explicit Lattice(std::size_t d = 0) : basis_(IntMatrix::identity(d)) {}

  /// Lattice generated by the given vectors; throws unless they span a
  /// full-rank lattice.
  static Lattice from_generators(std::size_t d, const std::vector<IntVec>& gens) {
    if (d == 0) return Lattice(0);
    HnfResult h = hnf(IntMatrix::from_columns(d, gens));
    if (h.rank() != d) throw std::invalid_argument("lattice generators are not full rank");
    Lattice L;
    L.basis_ = IntMatrix(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) L.basis_(i, j) = h.H(i, j);
    return L;
  }

  /// m Z^d.
  static Lattice scaled(std::size_t d, const Int& m) {
    std::vector<IntVec> gens;
    for (std::size_t i = 0; i < d; ++i) {
      IntVec e = zero_vec(d);
      e[i] = m;
      gens.push_back(e);
    }
    return from_generators(d, gens);
  }

  std::size_t dim() const { return basis_.rows(); }
  const IntMatrix& basis() const { return basis_; }
  IntVec basis_vector(std::size_t j) const { return basis_.column(j); }

  /// [Z^d : Lambda]
  Int index() const {
    Int p = 1;
    for (std::size_t i = 0; i < dim(); ++i) p *= basis_(i, i);
    return p;
  }

  /// Unique representative of v + Lambda with 0 <= r_i < H_ii.
  IntVec reduce(IntVec v) const {
    check_dim(v);
    for (std::size_t j = 0; j < dim(); ++j) {
      Int q = floor_div(v[j], basis_(j, j));
      if (q == 0) continue;
      for (std::size_t i = j; i < dim(); ++i) v[i] -= q * basis_(i, j);
    }
    return v;
  }

  bool contains(const IntVec& v) const { return is_zero(reduce(v)); }

  /// All reduced representatives of Z^d / Lambda, in lexicographic order.
  std::vector<IntVec> coset_representatives() const {
    std::vector<IntVec> out;
    IntVec cur = zero_vec(dim());
    enumerate_reps(0, cur, out);
    return out;
  }

  bool operator==(const Lattice& o) const { return basis_ == o.basis_; }

  void check_dim(const IntVec& v) const {
    if (v.size() != dim()) throw std::invalid_argument("lattice dimension mismatch");
  }

private:
  void enumerate_reps(std::size_t i, IntVec& cur, std::vector<IntVec>& out) const {
    if (i == dim()) {
      out.push_back(cur);
      return;
    }
    for (Int k = 0; k < basis_(i, i); ++k) {
      cur[i] = k;
      enumerate_reps(i + 1, cur, out);
    }
    cur[i] = 0;
  }

  IntMatrix basis_;
};

/// One congruence a . x == residue (mod modulus), modulus >= 1.
struct Congruence {
  IntVec coeffs;
  Int residue;
  Int modulus;
};

class LatticeCoset {
public:
  LatticeCoset() = default;
  LatticeCoset(Lattice lattice, const IntVec& rep) : lattice_(std::move(lattice)), rep_(lattice_.reduce(rep)) {}

  /// The whole of Z^d.
  static LatticeCoset full(std::size_t d) { return LatticeCoset(Lattice(d), zero_vec(d)); }

  std::size_t dim() const { return lattice_.dim(); }
  const Lattice& lattice() const { return lattice_; }
  const IntVec& rep() const { return rep_; }

  bool contains(const IntVec& v) const { return lattice_.contains(sub(v, rep_)); }

  bool is_full() const { return lattice_.index() == 1; }

  /// Congruences whose common solution set is exactly this coset, in reduced
  /// form (trivial ones dropped).
  std::vector<Congruence> congruences() const {
    std::vector<Congruence> out;
    const std::size_t d = dim();
    const Int det = lattice_.index();
    if (det == 1) return out;
    std::vector<IntVec> rows;
    for (std::size_t i = 0; i < d; ++i) rows.push_back(lattice_.basis().row(i));
    auto inv = inverse(rows);
    for (std::size_t i = 0; i < d; ++i) {
      IntVec a(d);
      for (std::size_t j = 0; j < d; ++j) a[j] = Rat(inv[i][j] * det).get_num();
      Int g = gcd(content(a), det);
      Int m = det / g;
      if (m == 1) continue;
      for (auto& x : a) x = mod(x / g, m);
      out.push_back({a, mod(dot(a, rep_), m), m});
    }
    return out;
  }

  bool operator==(const LatticeCoset& o) const { return lattice_ == o.lattice_ && rep_ == o.rep_; }

private:
  Lattice lattice_;
  IntVec rep_;
};

/// {x in Z^d : a.x == r (mod m) for every congruence}, or nullopt when empty.
inline std::optional<LatticeCoset> solve_congruences(std::span<const Congruence> atoms, std::size_t d) {
  if (atoms.empty()) return LatticeCoset::full(d);
  const std::size_t k = atoms.size();
  IntMatrix A(k, d + k);
  IntVec b(k);
  for (std::size_t j = 0; j < k; ++j) {
    const auto& c = atoms[j];
    if (c.coeffs.size() != d) throw std::invalid_argument("congruence dimension mismatch");
    if (c.modulus < 1) throw std::invalid_argument("congruence modulus must be positive");
    for (std::size_t i = 0; i < d; ++i) A(j, i) = c.coeffs[i];
    A(j, d + j) = c.modulus;
    b[j] = c.residue;
  }
  auto sol = solve_integer(A, b);
  if (!sol) return std::nullopt;
  IntVec x0(sol->particular.begin(), sol->particular.begin() + static_cast<std::ptrdiff_t>(d));
  std::vector<IntVec> gens;
  for (const auto& kv : sol->kernel) gens.emplace_back(kv.begin(), kv.begin() + static_cast<std::ptrdiff_t>(d));
  if (d == 0) return LatticeCoset::full(0);
  return LatticeCoset(Lattice::from_generators(d, gens), x0);
}

inline std::optional<LatticeCoset> coset_intersect(const LatticeCoset& a, const LatticeCoset& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("coset_intersect: dimension mismatch");
  auto ca = a.congruences();
  auto cb = b.congruences();
  ca.insert(ca.end(), cb.begin(), cb.end());
  return solve_congruences(ca, a.dim());
}

}  // namespace presburger
