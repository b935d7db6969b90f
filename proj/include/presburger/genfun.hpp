#pragma once

// Rational generating functions: sums of c * x^a / prod (1 - x^b_i).
// Construction from semilinear cells (Brion's vertex-cone decomposition with
// half-open triangulations), series extraction, monomial substitution, and
// specialization of variables to 1 by Laurent expansion along a curve.

#include "presburger/semilinear.hpp"

#include <functional>
#include <map>

namespace presburger {

struct GFTerm {
  Rat coef;
  IntVec numer_exp;
  std::vector<IntVec> denom;  ///< lex-positive, sorted
};

namespace detail {

inline std::vector<std::string> default_names(std::size_t d) {
  if (d == 1) return {"x"};
  std::vector<std::string> v;
  for (std::size_t i = 0; i < d; ++i) v.push_back("x" + std::to_string(i + 1));
  return v;
}

}  // namespace detail

/// Formal sum of basic fractions. Terms are kept merged and sorted, so two
/// objects built from the same fractions compare equal; semantic equality is
/// a property of the represented series only.
class RationalGF {
public:
  RationalGF() = default;
  explicit RationalGF(std::vector<std::string> vars) : vars_(std::move(vars)) {}
  explicit RationalGF(std::size_t d) : vars_(detail::default_names(d)) {}

  static RationalGF monomial(std::vector<std::string> vars, IntVec exp, Rat coef = 1) {
    RationalGF f(std::move(vars));
    f.add_term({std::move(coef), std::move(exp), {}});
    return f;
  }

  std::size_t dim() const { return vars_.size(); }
  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<GFTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Adds a term, flipping denominators into lex-positive form with
  /// 1/(1 - x^-b) = -x^b/(1 - x^b).
  void add_term(GFTerm t) { add_terms({std::move(t)}); }

  void add_terms(std::vector<GFTerm> ts) {
    for (auto& t : ts) {
      normalize(t);
      if (t.coef != 0) terms_.push_back(std::move(t));
    }
    merge();
  }

  RationalGF operator+(const RationalGF& o) const {
    check_same(o);
    RationalGF r = *this;
    r.add_terms(o.terms_);
    return r;
  }
  RationalGF operator*(const Rat& k) const {
    RationalGF r(vars_);
    std::vector<GFTerm> ts = terms_;
    for (auto& t : ts) t.coef *= k;
    r.add_terms(std::move(ts));
    return r;
  }
  RationalGF operator-() const { return *this * Rat(-1); }
  RationalGF operator-(const RationalGF& o) const { return *this + (-o); }

  /// Product of rational functions (denominator lists concatenate).
  RationalGF operator*(const RationalGF& o) const {
    check_same(o);
    RationalGF r(vars_);
    std::vector<GFTerm> ts;
    for (const auto& a : terms_)
      for (const auto& b : o.terms_) {
        GFTerm t{a.coef * b.coef, add(a.numer_exp, b.numer_exp), a.denom};
        t.denom.insert(t.denom.end(), b.denom.begin(), b.denom.end());
        ts.push_back(std::move(t));
      }
    r.add_terms(std::move(ts));
    return r;
  }

  bool operator==(const RationalGF& o) const {
    if (vars_ != o.vars_ || terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const auto &a = terms_[i], &b = o.terms_[i];
      if (a.coef != b.coef || a.numer_exp != b.numer_exp || a.denom != b.denom) return false;
    }
    return true;
  }

  void rename(std::vector<std::string> vars) {
    if (vars.size() != dim()) throw SemanticError("rename: wrong number of variables");
    vars_ = std::move(vars);
  }

private:
  void check_same(const RationalGF& o) const {
    if (o.dim() != dim()) throw SemanticError("generating functions have different dimensions");
  }

  void normalize(GFTerm& t) const {
    if (t.numer_exp.size() != dim()) throw SemanticError("term exponent has the wrong dimension");
    for (auto& b : t.denom) {
      if (b.size() != dim()) throw SemanticError("denominator exponent has the wrong dimension");
      if (is_zero(b)) throw SemanticError("denominator vector is zero");
      if (!lex_positive(b)) {
        b = negate(b);
        t.coef = -t.coef;
        t.numer_exp = add(t.numer_exp, b);
      }
    }
    std::sort(t.denom.begin(), t.denom.end());
  }

  void merge() {
    std::map<std::pair<IntVec, std::vector<IntVec>>, Rat> acc;
    for (auto& t : terms_) acc[{t.numer_exp, t.denom}] += t.coef;
    terms_.clear();
    for (auto& [key, c] : acc)
      if (c != 0) terms_.push_back({c, key.first, key.second});
  }

  std::vector<std::string> vars_;
  std::vector<GFTerm> terms_;
};

// ---------------------------------------------------------------------------
// Construction from cells

namespace detail {

/// x = origin + map * w
struct AffineMap {
  IntVec origin;
  IntMatrix map;
};

/// Lattice points of the half-open simplicial cone apex + sum lambda_i g_i
/// (lambda_i > 0 on open facets), as numerator exponents over prod (1 - w^g).
inline std::vector<IntVec> parallelepiped_points(const RatVec& apex, const std::vector<IntVec>& gens,
                                                 const std::vector<bool>& open) {
  const std::size_t k = gens.size();
  Lattice L = Lattice::from_generators(k, gens);
  std::vector<IntVec> rows(k, IntVec(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) rows[i][j] = gens[j][i];
  auto inv = inverse(rows);
  std::vector<IntVec> out;
  for (const auto& rho : L.coset_representatives()) {
    RatVec diff(k);
    for (std::size_t i = 0; i < k; ++i) diff[i] = Rat(rho[i]) - apex[i];
    IntVec shift(k);  // integer part removed from lambda
    for (std::size_t i = 0; i < k; ++i) {
      Rat lam = dot(std::span<const Rat>(inv[i]), std::span<const Rat>(diff));
      shift[i] = open[i] ? Int(ceil(lam) - 1) : floor(lam);
    }
    IntVec p = rho;
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < k; ++i) p[i] -= shift[j] * gens[j][i];
    out.push_back(p);
  }
  return out;
}

}  // namespace detail

/// Generating function of P ∩ (λ + Λ) for a pointed rational polyhedron P.
inline RationalGF gf_of_cell(const SemilinearCell& cell, std::vector<std::string> vars) {
  const Polyhedron& P = cell.polyhedron;
  const std::size_t d = P.dim();
  if (vars.size() != d) throw SemanticError("gf_of_cell: wrong number of variable names");
  if (cell.coset.dim() != d) throw SemanticError("gf_of_cell: coset dimension mismatch");
  if (!is_pointed(P)) throw SemanticError("non-pointed polyhedron");
  RationalGF result(vars);

  // x = r + H u parametrizes the coset.
  detail::AffineMap x_of{cell.coset.rep(), cell.coset.lattice().basis()};
  std::vector<Constraint> ineqs, eqs;
  auto pull_back = [&](const Constraint& c) {
    // a.(origin + M w) >= b  ->  (a M) w >= b - a.origin
    IntVec row(x_of.map.cols());
    for (std::size_t j = 0; j < row.size(); ++j)
      for (std::size_t i = 0; i < d; ++i) row[j] += c.a[i] * x_of.map(i, j);
    return Constraint{row, c.b - dot(c.a, x_of.origin)};
  };
  for (const auto& c : P.inequalities()) ineqs.push_back(pull_back(c));
  for (const auto& c : P.equalities()) eqs.push_back(pull_back(c));

  std::size_t k = d;
  Polyhedron Q(k);
  while (true) {
    if (!eqs.empty()) {
      IntMatrix A(eqs.size(), k);
      IntVec rhs;
      for (std::size_t i = 0; i < eqs.size(); ++i) {
        for (std::size_t j = 0; j < k; ++j) A(i, j) = eqs[i].a[j];
        rhs.push_back(eqs[i].b);
      }
      auto sol = solve_integer(A, rhs);
      if (!sol) return result;
      // w = w0 + K v
      const std::size_t k2 = sol->kernel.size();
      IntMatrix K = IntMatrix::from_columns(k, sol->kernel);
      if (k2 == 0) K = IntMatrix(k, 0);
      IntVec origin = add(x_of.origin, x_of.map.apply(sol->particular));
      IntMatrix map = x_of.map * K;
      std::vector<Constraint> next;
      for (const auto& c : ineqs) {
        IntVec row(k2);
        for (std::size_t j = 0; j < k2; ++j)
          for (std::size_t i = 0; i < k; ++i) row[j] += c.a[i] * K(i, j);
        next.push_back({row, c.b - dot(c.a, sol->particular)});
      }
      x_of = {origin, map};
      ineqs = std::move(next);
      eqs.clear();
      k = k2;
    }
    Q = Polyhedron(k);
    for (const auto& c : ineqs) Q.add_inequality(c.a, c.b);
    auto verts = vertices(Q);
    if (verts.empty()) return result;
    auto rays = recession_cone(Q).generators;
    std::vector<IntVec> dirs = rays;
    for (std::size_t i = 1; i < verts.size(); ++i) {
      RatVec diff(k);
      for (std::size_t j = 0; j < k; ++j) diff[j] = verts[i][j] - verts[0][j];
      dirs.push_back(primitive_direction(diff));
    }
    if (rank(dirs, k) == k) break;
    // Move implicit equalities (tight on every vertex, parallel to every ray).
    std::vector<Constraint> kept;
    for (const auto& c : ineqs) {
      bool tight = std::all_of(verts.begin(), verts.end(), [&](const RatVec& v) { return dot(c.a, v) == Rat(c.b); }) &&
                   std::all_of(rays.begin(), rays.end(), [&](const IntVec& r) { return dot(c.a, r) == 0; });
      (tight ? eqs : kept).push_back(c);
    }
    ineqs = std::move(kept);
  }

  auto to_x = [&](const IntVec& w) { return add(x_of.origin, x_of.map.apply(w)); };
  if (k == 0) {
    result.add_term({1, x_of.origin, {}});
    return result;
  }

  std::vector<GFTerm> terms;
  for (const auto& v : vertices(Q)) {
    Cone K = tangent_cone(Q, v);
    RatVec xi(k, Rat(0));
    for (const auto& g : K.generators)
      for (std::size_t j = 0; j < k; ++j) xi[j] += g[j];
    for (const auto& piece : triangulate(K)) {
      auto open = open_facets(piece.generators, xi);
      std::vector<IntVec> den;
      for (const auto& g : piece.generators) den.push_back(x_of.map.apply(g));
      for (const auto& p : detail::parallelepiped_points(v, piece.generators, open))
        terms.push_back({1, to_x(p), den});
    }
  }
  result.add_terms(std::move(terms));
  return result;
}

inline RationalGF gf_of_cell(const SemilinearCell& cell) {
  return gf_of_cell(cell, detail::default_names(cell.polyhedron.dim()));
}

inline RationalGF gf_of_semilinear(const SemilinearSet& S) {
  RationalGF f(S.vars);
  for (const auto& c : S.cells) f = f + gf_of_cell(c, S.vars);
  return f;
}

// ---------------------------------------------------------------------------
// Series

/// Dense coefficient table over the box [0,B]^d, lexicographic order.
struct SeriesTable {
  std::size_t dim = 0;
  long bound = 0;
  std::vector<Rat> values;

  std::size_t index(const IntVec& p) const {
    std::size_t idx = 0;
    for (const auto& x : p) idx = idx * static_cast<std::size_t>(bound + 1) + x.get_ui();
    return idx;
  }
  bool in_box(const IntVec& p) const {
    return std::all_of(p.begin(), p.end(), [&](const Int& x) { return x >= 0 && x <= bound; });
  }
  const Rat& at(const IntVec& p) const { return values.at(index(p)); }
  Rat& at(const IntVec& p) { return values.at(index(p)); }
  bool operator==(const SeriesTable&) const = default;
};

namespace detail {

inline SeriesTable empty_table(std::size_t d, long B) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < d; ++i) n *= static_cast<std::size_t>(B + 1);
  return SeriesTable{d, B, std::vector<Rat>(n, Rat(0))};
}

/// Positive integer functional on the denominators: all ones, else
/// (M^(d-1), ..., M, 1) for growing M.
inline IntVec positive_functional(const std::vector<IntVec>& den, std::size_t d) {
  for (Int M = 1;; ++M) {
    IntVec tau(d);
    Int w = 1;
    for (std::size_t j = d; j-- > 0;) {
      tau[j] = w;
      w *= M;
    }
    if (std::all_of(den.begin(), den.end(), [&](const IntVec& b) { return dot(tau, b) > 0; })) return tau;
    if (M > 1000000) throw SemanticError("not summable in series order");
  }
}

/// Adds coef * x^a / prod(1 - x^b) restricted to the box into `table`.
inline void add_term_series(const GFTerm& t, SeriesTable& table) {
  const std::size_t d = table.dim;
  const long B = table.bound;
  const auto& a = t.numer_exp;
  bool nonneg = std::all_of(t.denom.begin(), t.denom.end(), [](const IntVec& b) {
    return std::all_of(b.begin(), b.end(), [](const Int& x) { return x >= 0; });
  });
  if (nonneg) {
    // Knapsack sweep over the region [min(a_j,0), B]^d; exponents only grow.
    for (std::size_t j = 0; j < d; ++j)
      if (a[j] > B) return;
    IntVec lo(d);
    std::vector<std::size_t> ext(d);
    std::size_t n = 1;
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = a[j] < 0 ? a[j] : Int(0);
      ext[j] = static_cast<std::size_t>(Int(B - lo[j] + 1).get_ui());
      n *= ext[j];
    }
    std::vector<Rat> region(n, Rat(0));
    auto idx = [&](const IntVec& p) {
      std::size_t i = 0;
      for (std::size_t j = 0; j < d; ++j) i = i * ext[j] + Int(p[j] - lo[j]).get_ui();
      return i;
    };
    region[idx(a)] = t.coef;
    for (const auto& b : t.denom) {
      // region[p] += region[p - b] in increasing order
      IntVec p = lo;
      for (std::size_t c = 0; c < n; ++c) {
        IntVec q = sub(p, b);
        bool inside = true;
        for (std::size_t j = 0; j < d; ++j)
          if (q[j] < lo[j]) inside = false;
        if (inside && region[idx(q)] != 0) region[c] += region[idx(q)];
        for (std::size_t j = d; j-- > 0;) {
          if (p[j] < B) {
            ++p[j];
            break;
          }
          p[j] = lo[j];
        }
      }
    }
    IntVec p = lo;
    for (std::size_t c = 0; c < n; ++c) {
      if (region[c] != 0 && table.in_box(p)) table.at(p) += region[c];
      for (std::size_t j = d; j-- > 0;) {
        if (p[j] < B) {
          ++p[j];
          break;
        }
        p[j] = lo[j];
      }
    }
    return;
  }
  const std::size_t k = t.denom.size();
  if (rank(t.denom, d) == k) {
    // Independent denominators: each box point has at most one preimage.
    std::vector<IntVec> rows(d, IntVec(k));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < k; ++j) rows[i][j] = t.denom[j][i];
    IntVec p = zero_vec(d);
    for (std::size_t c = 0; c < table.values.size(); ++c) {
      auto lam = solve_rational(rows, to_rat(sub(p, a)), k);
      if (lam && std::all_of(lam->begin(), lam->end(), [](const Rat& x) { return x >= 0 && is_integer(x); })) {
        table.values[c] += t.coef;
      }
      for (std::size_t j = d; j-- > 0;) {
        if (p[j] < B) {
          ++p[j];
          break;
        }
        p[j] = 0;
      }
    }
    return;
  }
  // Dependent denominators with mixed signs: enumerate multiplicities under a
  // positive functional budget.
  IntVec tau = positive_functional(t.denom, d);
  Int budget = 0;
  for (const auto& x : tau) budget += x * B;
  budget -= dot(tau, a);
  std::function<void(std::size_t, IntVec, Int)> rec = [&](std::size_t i, IntVec cur, Int left) {
    if (left < 0) return;
    if (i == k) {
      if (table.in_box(cur)) table.at(cur) += t.coef;
      return;
    }
    Int step = dot(tau, t.denom[i]);
    for (Int m = 0; m * step <= left; ++m) {
      rec(i + 1, cur, left - m * step);
      cur = add(cur, t.denom[i]);
    }
  };
  rec(0, a, budget);
}

}  // namespace detail

/// Exact series coefficients of f on [0,B]^d, summing the lexicographic
/// expansions of the terms.
inline SeriesTable series_coeffs(const RationalGF& f, long B) {
  if (B < 0) throw SemanticError("series bound must be nonnegative");
  SeriesTable table = detail::empty_table(f.dim(), B);
  for (const auto& t : f.terms()) detail::add_term_series(t, table);
  return table;
}

/// Univariate convenience: coefficients of x^0..x^N.
inline std::vector<Rat> series_univariate(const RationalGF& f, long N) {
  if (f.dim() != 1) throw SemanticError("expected a univariate generating function");
  return series_coeffs(f, N).values;
}

// ---------------------------------------------------------------------------
// Substitution and specialization

/// f(z^{l_1}, ..., z^{l_d}) for image exponent vectors l_i in Z^k.
inline RationalGF monomial_substitute(const RationalGF& f, const std::vector<IntVec>& images,
                                      std::vector<std::string> new_vars) {
  if (images.size() != f.dim()) throw SemanticError("monomial_substitute: one image per variable required");
  const std::size_t k = new_vars.size();
  for (const auto& l : images)
    if (l.size() != k) throw SemanticError("monomial_substitute: image has the wrong dimension");
  auto image = [&](const IntVec& a) {
    IntVec r = zero_vec(k);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < k; ++j) r[j] += a[i] * images[i][j];
    return r;
  };
  RationalGF g(std::move(new_vars));
  std::vector<GFTerm> ts;
  for (const auto& t : f.terms()) {
    GFTerm n{t.coef, image(t.numer_exp), {}};
    for (const auto& b : t.denom) {
      IntVec ib = image(b);
      if (is_zero(ib))
        throw SemanticError("denominator " + to_string(b) + " maps to the zero vector; use specialize_ones");
      n.denom.push_back(ib);
    }
    ts.push_back(std::move(n));
  }
  g.add_terms(std::move(ts));
  return g;
}

inline RationalGF monomial_substitute(const RationalGF& f, const std::vector<IntVec>& images) {
  std::size_t k = images.empty() ? 0 : images.front().size();
  return monomial_substitute(f, images, detail::default_names(k));
}

namespace detail {

/// Truncated power series in s with coefficients of type C.
template <class C>
using Series = std::vector<C>;

inline Series<Rat> binomial_series(const Int& A, std::size_t n) {
  Series<Rat> s(n + 1);
  for (std::size_t j = 0; j <= n; ++j) s[j] = binomial(A, static_cast<long>(j));
  return s;
}

inline Series<Rat> mul(const Series<Rat>& a, const Series<Rat>& b, std::size_t n) {
  Series<Rat> c(n + 1, Rat(0));
  for (std::size_t i = 0; i < a.size() && i <= n; ++i)
    for (std::size_t j = 0; j < b.size() && i + j <= n; ++j) c[i + j] += a[i] * b[j];
  return c;
}

inline Series<Rat> reciprocal(const Series<Rat>& a, std::size_t n) {
  Series<Rat> r(n + 1, Rat(0));
  r[0] = 1 / a[0];
  for (std::size_t m = 1; m <= n; ++m) {
    Rat acc = 0;
    for (std::size_t j = 1; j <= m && j < a.size(); ++j) acc += a[j] * r[m - j];
    r[m] = -acc / a[0];
  }
  return r;
}

/// (1+s)^k - 1 divided by s, as a series.
inline Series<Rat> w_series(const Int& k, std::size_t n) {
  Series<Rat> w(n + 1);
  for (std::size_t j = 0; j <= n; ++j) w[j] = binomial(k, static_cast<long>(j + 1));
  return w;
}

/// Is a sum of basic fractions identically zero as a rational function?
/// Brings all terms over a common product of (1 - x^b) factors.
inline bool is_zero_rational(const RationalGF& f) {
  if (f.empty()) return true;
  std::map<IntVec, int> need;  // b -> max multiplicity
  for (const auto& t : f.terms()) {
    std::map<IntVec, int> mult;
    for (const auto& b : t.denom) ++mult[b];
    for (const auto& [b, m] : mult) need[b] = std::max(need[b], m);
  }
  std::map<IntVec, Rat> total;
  for (const auto& t : f.terms()) {
    std::map<IntVec, int> missing = need;
    for (const auto& b : t.denom) --missing[b];
    std::map<IntVec, Rat> poly{{t.numer_exp, t.coef}};
    for (const auto& [b, m] : missing)
      for (int i = 0; i < m; ++i) {
        std::map<IntVec, Rat> next;
        for (const auto& [e, c] : poly) {
          next[e] += c;
          next[add(e, b)] -= c;
        }
        poly.clear();
        for (auto& [e, c] : next)
          if (c != 0) poly.emplace(e, c);
      }
    for (const auto& [e, c] : poly) total[e] += c;
  }
  return std::all_of(total.begin(), total.end(), [](const auto& kv) { return kv.second == 0; });
}

}  // namespace detail

/// Laurent coefficients (orders -z..0 in s = t - 1) of one specialized term.
struct LaurentTrace {
  std::vector<RationalGF> coefficients;  ///< index i holds order i - z
  long lowest_order() const { return -static_cast<long>(coefficients.size()) + 1; }
};

/// Sets the variables whose indices are listed in `to_one` to 1. The result
/// lives in the remaining variables (in their original order).
inline RationalGF specialize_ones(const RationalGF& f, const std::vector<std::size_t>& to_one,
                                  std::vector<LaurentTrace>* trace = nullptr) {
  const std::size_t d = f.dim();
  std::vector<bool> special(d, false);
  for (auto i : to_one) {
    if (i >= d) throw SemanticError("specialize_ones: variable index out of range");
    special[i] = true;
  }
  std::vector<std::size_t> keep, spec;
  for (std::size_t i = 0; i < d; ++i) (special[i] ? spec : keep).push_back(i);
  std::vector<std::string> names;
  for (auto i : keep) names.push_back(f.vars()[i]);
  auto part = [](const IntVec& v, const std::vector<std::size_t>& idx) {
    IntVec r;
    for (auto i : idx) r.push_back(v[i]);
    return r;
  };

  // Generic direction tau = (1, M, M^2, ...) with <tau, beta> != 0.
  std::vector<IntVec> betas;
  for (const auto& t : f.terms())
    for (const auto& b : t.denom) {
      IntVec beta = part(b, spec);
      if (!is_zero(beta)) betas.push_back(beta);
    }
  IntVec tau(spec.size());
  for (Int M = 1;; ++M) {
    Int w = 1;
    for (auto& x : tau) {
      x = w;
      w *= M;
    }
    if (std::all_of(betas.begin(), betas.end(), [&](const IntVec& b) { return dot(tau, b) != 0; })) break;
  }

  RationalGF result(names);
  std::vector<RationalGF> negative;  // summed orders -1, -2, ...
  for (const auto& t : f.terms()) {
    std::vector<Int> poles;
    std::vector<std::pair<Int, IntVec>> mixed;  // (k, alpha)
    std::vector<IntVec> plain;
    for (const auto& b : t.denom) {
      IntVec alpha = part(b, keep), beta = part(b, spec);
      Int k = dot(tau, beta);
      if (is_zero(beta)) plain.push_back(alpha);
      else if (is_zero(alpha)) poles.push_back(k);
      else mixed.emplace_back(k, alpha);
    }
    const std::size_t z = poles.size();
    // scalar part: (1+s)^A * prod -1/w_k(s)
    detail::Series<Rat> scalar = detail::binomial_series(dot(tau, part(t.numer_exp, spec)), z);
    for (const auto& k : poles) {
      auto r = detail::reciprocal(detail::w_series(k, z), z);
      for (auto& c : r) c = -c;
      scalar = detail::mul(scalar, r, z);
    }
    // prefactor coef x^a / prod (1 - x^alpha)
    RationalGF pre(names);
    pre.add_term({t.coef, part(t.numer_exp, keep), plain});
    detail::Series<RationalGF> series(z + 1, RationalGF(names));
    for (std::size_t j = 0; j <= z; ++j)
      if (scalar[j] != 0) series[j] = pre * scalar[j];
    for (const auto& [k, alpha] : mixed) {
      // 1/(1 - (1+s)^k X) = sum_n u^n X^n / (1-X)^(n+1), u = s w_k(s)
      detail::Series<Rat> u(z + 1, Rat(0));
      auto w = detail::w_series(k, z);
      for (std::size_t j = 1; j <= z; ++j) u[j] = w[j - 1];
      detail::Series<Rat> un(z + 1, Rat(0));
      un[0] = 1;
      detail::Series<RationalGF> factor(z + 1, RationalGF(names));
      for (std::size_t n = 0; n <= z; ++n) {
        RationalGF frac(names);
        frac.add_term({1, scale(alpha, Int(static_cast<long>(n))), std::vector<IntVec>(n + 1, alpha)});
        for (std::size_t j = 0; j <= z; ++j)
          if (un[j] != 0) factor[j] = factor[j] + frac * un[j];
        un = detail::mul(un, u, z);
      }
      detail::Series<RationalGF> next(z + 1, RationalGF(names));
      for (std::size_t i = 0; i <= z; ++i)
        for (std::size_t j = 0; i + j <= z; ++j)
          if (!series[i].empty() && !factor[j].empty()) next[i + j] = next[i + j] + series[i] * factor[j];
      series = std::move(next);
    }
    if (trace) trace->push_back(LaurentTrace{series});
    result = result + series[z];
    for (std::size_t m = 1; m <= z; ++m) {
      if (negative.size() < m) negative.resize(m, RationalGF(names));
      negative[m - 1] = negative[m - 1] + series[z - m];
    }
  }
  for (const auto& g : negative)
    if (!detail::is_zero_rational(g)) throw DivergenceError("divergent specialization");
  return result;
}

/// Specializes every variable to 1: the number of points of a finite set.
inline Rat cardinality(const RationalGF& f) {
  std::vector<std::size_t> all(f.dim());
  for (std::size_t i = 0; i < f.dim(); ++i) all[i] = i;
  RationalGF c;
  try {
    c = specialize_ones(f, all);
  } catch (const DivergenceError&) {
    throw DivergenceError("infinite set");
  }
  Rat total = 0;
  for (const auto& t : c.terms()) total += t.coef;
  return total;
}

}  // namespace presburger
