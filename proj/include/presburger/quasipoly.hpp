#pragma once

// Quasi-polynomials, piecewise quasi-polynomials and step-polynomials, the
// conversions between rational generating functions and piecewise
// quasi-polynomials, vector partition functions, and synthesis of a formula
// whose solution counts realize a univariate quasi-polynomial.

#include "presburger/genfun.hpp"

#include <numeric>

namespace presburger {

/// Polynomial in n variables with rational coefficients.
class Polynomial {
public:
  using Exponent = std::vector<long>;

  Polynomial() = default;
  explicit Polynomial(std::size_t n) : n_(n) {}

  static Polynomial constant(std::size_t n, const Rat& c) {
    Polynomial p(n);
    p.add(Exponent(n, 0), c);
    return p;
  }
  static Polynomial variable(std::size_t n, std::size_t i) {
    Polynomial p(n);
    Exponent e(n, 0);
    e[i] = 1;
    p.add(e, 1);
    return p;
  }
  /// coeffs . x + c
  static Polynomial affine(const RatVec& coeffs, const Rat& c) {
    Polynomial p = constant(coeffs.size(), c);
    for (std::size_t i = 0; i < coeffs.size(); ++i) p = p + variable(coeffs.size(), i) * coeffs[i];
    return p;
  }
  /// sum_k coeffs[k] x^k
  static Polynomial univariate(const std::vector<Rat>& coeffs) {
    Polynomial p(1);
    for (std::size_t k = 0; k < coeffs.size(); ++k) p.add({static_cast<long>(k)}, coeffs[k]);
    return p;
  }

  std::size_t dim() const { return n_; }
  const std::map<Exponent, Rat>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  long degree() const {
    long d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0L));
    return d;
  }

  void add(const Exponent& e, const Rat& c) {
    if (e.size() != n_) throw std::invalid_argument("polynomial exponent dimension mismatch");
    Rat& slot = terms_[e];
    slot += c;
    if (slot == 0) terms_.erase(e);
  }

  Rat eval(const RatVec& x) const {
    if (x.size() != n_) throw SemanticError("polynomial evaluated at a point of the wrong dimension");
    Rat total = 0;
    for (const auto& [e, c] : terms_) {
      Rat m = c;
      for (std::size_t i = 0; i < n_; ++i)
        for (long k = 0; k < e[i]; ++k) m *= x[i];
      total += m;
    }
    return total;
  }
  Rat eval(const IntVec& x) const { return eval(to_rat(x)); }

  /// Coefficient list of a univariate polynomial.
  std::vector<Rat> coefficients() const {
    if (n_ != 1) throw std::invalid_argument("coefficients() requires a univariate polynomial");
    std::vector<Rat> c(static_cast<std::size_t>(degree() + 1), Rat(0));
    for (const auto& [e, v] : terms_) c[static_cast<std::size_t>(e[0])] = v;
    return c;
  }

  Polynomial operator+(const Polynomial& o) const {
    Polynomial r = *this;
    for (const auto& [e, c] : o.terms_) r.add(e, c);
    return r;
  }
  Polynomial operator-(const Polynomial& o) const { return *this + o * Rat(-1); }
  Polynomial operator*(const Rat& k) const {
    Polynomial r(n_);
    if (k == 0) return r;
    for (const auto& [e, c] : terms_) r.add(e, c * k);
    return r;
  }
  Polynomial operator*(const Polynomial& o) const {
    Polynomial r(n_);
    for (const auto& [a, x] : terms_)
      for (const auto& [b, y] : o.terms_) {
        Exponent e(n_);
        for (std::size_t i = 0; i < n_; ++i) e[i] = a[i] + b[i];
        r.add(e, x * y);
      }
    return r;
  }

  /// Substitutes polynomials (in a common number of variables) for the variables.
  Polynomial compose(const std::vector<Polynomial>& images) const {
    if (images.size() != n_) throw std::invalid_argument("compose: one image per variable required");
    std::size_t m = images.empty() ? 0 : images.front().dim();
    Polynomial r(m);
    for (const auto& [e, c] : terms_) {
      Polynomial t = constant(m, c);
      for (std::size_t i = 0; i < n_; ++i)
        for (long k = 0; k < e[i]; ++k) t = t * images[i];
      r = r + t;
    }
    return r;
  }

  bool operator==(const Polynomial&) const = default;

private:
  std::size_t n_ = 0;
  std::map<Exponent, Rat> terms_;
};

/// One polynomial per coset of a full-rank lattice.
struct QuasiPolynomial {
  std::size_t n = 0;
  Lattice lattice;
  std::map<IntVec, Polynomial> constituents;  ///< keyed by reduced coset representative

  static QuasiPolynomial constant(std::size_t n, const Rat& c) {
    QuasiPolynomial q{n, Lattice(n), {}};
    q.constituents[zero_vec(n)] = Polynomial::constant(n, c);
    return q;
  }

  Rat eval(const IntVec& p) const {
    auto it = constituents.find(lattice.reduce(p));
    return it == constituents.end() ? Rat(0) : it->second.eval(p);
  }
};

struct QPPiece {
  Polyhedron cell;
  QuasiPolynomial qp;
};

/// Pieces are disjoint on N^n; points outside every piece evaluate to 0.
struct PiecewiseQuasiPolynomial {
  std::size_t n = 0;
  std::vector<QPPiece> pieces;
};

inline Rat qp_eval(const QuasiPolynomial& q, const IntVec& p) { return q.eval(p); }

inline Rat pqp_eval(const PiecewiseQuasiPolynomial& g, const IntVec& p) {
  if (p.size() != g.n) throw SemanticError("pqp_eval: point has the wrong dimension");
  for (const auto& piece : g.pieces)
    if (piece.cell.contains(p)) return piece.qp.eval(p);
  return 0;
}

/// Affine form under a floor: floor(coeffs . p + constant).
struct AffineForm {
  RatVec coeffs;
  Rat constant;

  Rat eval(const IntVec& p) const { return dot(p, coeffs) + constant; }
};

struct StepTerm {
  Rat coef;
  std::vector<AffineForm> factors;
};

/// sum of coef * prod floor(form).
struct StepPolynomial {
  std::size_t n = 0;
  std::vector<StepTerm> terms;
};

inline Rat step_eval(const StepPolynomial& s, const IntVec& p) {
  if (p.size() != s.n) throw SemanticError("step_eval: point has the wrong dimension");
  Rat total = 0;
  for (const auto& t : s.terms) {
    Rat v = t.coef;
    for (const auto& f : t.factors) v *= Rat(floor(f.eval(p)));
    total += v;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Univariate normal form

/// Exceptional values for p < threshold, then one polynomial per residue
/// class modulo the period.
struct UnivariateQP {
  long threshold = 0;
  std::vector<Rat> initial;
  long period = 1;
  std::vector<Polynomial> constituents;  ///< index r: polynomial for p = r mod period

  Rat eval(long p) const {
    if (p < 0) throw SemanticError("evaluation point must be in N");
    if (p < threshold) return initial[static_cast<std::size_t>(p)];
    return eventual(p);
  }
  Rat eventual(long p) const { return constituents[static_cast<std::size_t>(p % period)].eval(RatVec{Rat(p)}); }

  bool is_zero() const {
    return std::all_of(initial.begin(), initial.end(), [](const Rat& x) { return x == 0; }) &&
           std::all_of(constituents.begin(), constituents.end(), [](const Polynomial& q) { return q.is_zero(); });
  }

  /// Smallest period and threshold describing the same function.
  void minimize() {
    for (long m = 1; m < period; ++m) {
      if (period % m) continue;
      bool same = true;
      for (long r = m; r < period && same; ++r) same = constituents[r] == constituents[r % m];
      if (same) {
        constituents.resize(static_cast<std::size_t>(m));
        period = m;
        break;
      }
    }
    while (threshold > 0 && eventual(threshold - 1) == initial.back()) {
      --threshold;
      initial.pop_back();
    }
  }
};

namespace detail {

/// Polynomial of degree <= samples.size()-1 through (x_j, y_j).
inline Polynomial interpolate(const std::vector<long>& xs, const std::vector<Rat>& ys) {
  const std::size_t k = xs.size();
  std::vector<IntVec> rows;
  for (long x : xs) {
    IntVec row(k);
    Int pw = 1;
    for (std::size_t j = 0; j < k; ++j) {
      row[j] = pw;
      pw *= x;
    }
    rows.push_back(row);
  }
  auto c = solve_rational(rows, ys, k);
  if (!c) throw std::logic_error("interpolation nodes are not distinct");
  return Polynomial::univariate(*c);
}

}  // namespace detail

/// Exact coefficient interpolation: period = lcm of denominator exponents,
/// degree <= (number of denominator factors) - 1.
inline UnivariateQP univariate_qp(const RationalGF& f) {
  if (f.dim() != 1) throw SemanticError("expected a univariate generating function");
  long m = 1, D = -1, T = 0;
  for (const auto& t : f.terms()) {
    for (const auto& b : t.denom) m = std::lcm(m, b[0].get_si());
    D = std::max(D, static_cast<long>(t.denom.size()) - 1);
    long a = t.numer_exp[0].get_si();
    T = std::max(T, t.denom.empty() ? a + 1 : a);
  }
  UnivariateQP q;
  q.period = m;
  const long samples = D + 1, checks = 2;
  const long N = T + m * (samples + checks);
  auto c = series_univariate(f, N);
  for (long r = 0; r < m; ++r) {
    long p0 = T + mod(Int(r - T), Int(m)).get_si();
    std::vector<long> xs;
    std::vector<Rat> ys;
    for (long j = 0; j < samples; ++j) {
      xs.push_back(p0 + j * m);
      ys.push_back(c[static_cast<std::size_t>(p0 + j * m)]);
    }
    Polynomial poly = samples > 0 ? detail::interpolate(xs, ys) : Polynomial(1);
    for (long j = samples; j < samples + checks; ++j) {
      long p = p0 + j * m;
      if (poly.eval(RatVec{Rat(p)}) != c[static_cast<std::size_t>(p)])
        throw std::logic_error("quasi-polynomial interpolation failed its check");
    }
    q.constituents.push_back(poly);
  }
  q.threshold = T;
  q.initial.assign(c.begin(), c.begin() + T);
  q.minimize();
  return q;
}

namespace detail {

inline Polyhedron point_cell(long i) {
  Polyhedron P(1);
  P.add_equality({1}, i);
  return P;
}

/// Integer interval [lo, hi] of a 1-D polyhedron in N; no hi when unbounded.
inline std::pair<Int, std::optional<Int>> interval(const Polyhedron& P) {
  Int lo = 0;
  std::optional<Int> hi;
  auto lower = [&](const Int& v) { lo = std::max(lo, v); };
  auto upper = [&](const Int& v) { hi = hi ? std::min(*hi, v) : v; };
  for (const auto& c : P.inequalities()) {
    const Int& a = c.a[0];
    if (a > 0) lower(ceil_div(c.b, a));
    else if (a < 0) upper(floor_div(c.b, a));
    else if (c.b > 0) upper(Int(-1));
  }
  for (const auto& c : P.equalities()) {
    const Int& a = c.a[0];
    if (a == 0) {
      if (c.b != 0) upper(Int(-1));
    } else if (!divides(a, c.b)) {
      upper(Int(-1));
    } else {
      lower(c.b / a);
      upper(c.b / a);
    }
  }
  return {lo, hi};
}

}  // namespace detail

inline PiecewiseQuasiPolynomial to_pqp(const UnivariateQP& u) {
  PiecewiseQuasiPolynomial g{1, {}};
  for (long i = 0; i < u.threshold; ++i)
    g.pieces.push_back({detail::point_cell(i), QuasiPolynomial::constant(1, u.initial[static_cast<std::size_t>(i)])});
  Polyhedron tail(1);
  tail.add_inequality({1}, u.threshold);
  QuasiPolynomial q{1, Lattice::scaled(1, u.period), {}};
  for (long r = 0; r < u.period; ++r) q.constituents[{Int(r)}] = u.constituents[static_cast<std::size_t>(r)];
  g.pieces.push_back({tail, q});
  return g;
}

/// Normal form of a univariate piecewise quasi-polynomial.
inline UnivariateQP univariate_form(const PiecewiseQuasiPolynomial& g) {
  if (g.n != 1) throw UnsupportedError("expected a univariate piecewise quasi-polynomial");
  long T = 0;
  const QPPiece* tail = nullptr;
  for (const auto& piece : g.pieces) {
    auto [lo, hi] = detail::interval(piece.cell);
    if (hi) {
      if (*hi >= lo) T = std::max(T, hi->get_si() + 1);
    } else {
      if (tail) throw SemanticError("pieces overlap: two unbounded cells");
      tail = &piece;
      T = std::max(T, lo.get_si());
    }
  }
  UnivariateQP u;
  u.threshold = T;
  for (long p = 0; p < T; ++p) u.initial.push_back(pqp_eval(g, {Int(p)}));
  if (!tail) {
    u.constituents = {Polynomial(1)};
  } else {
    u.period = tail->qp.lattice.index().get_si();
    for (long r = 0; r < u.period; ++r) {
      auto it = tail->qp.constituents.find({Int(r)});
      u.constituents.push_back(it == tail->qp.constituents.end() ? Polynomial(1) : it->second);
    }
  }
  u.minimize();
  return u;
}

inline PiecewiseQuasiPolynomial rgf_to_pqp(const RationalGF& f) { return to_pqp(univariate_qp(f)); }

/// sum_p g(p) x^p: for every monomial p^e of every constituent, the points
/// (p, c) with p in the piece and 1 <= c_ij <= p_i, with the c specialized to 1.
inline RationalGF pqp_to_rgf(const PiecewiseQuasiPolynomial& g, std::vector<std::string> vars) {
  const std::size_t n = g.n;
  if (vars.size() != n) throw SemanticError("pqp_to_rgf: wrong number of variable names");
  RationalGF total(vars);
  for (const auto& piece : g.pieces) {
    for (const auto& [rep, poly] : piece.qp.constituents) {
      for (const auto& [e, coef] : poly.terms()) {
        const std::size_t k = static_cast<std::size_t>(std::accumulate(e.begin(), e.end(), 0L));
        const std::size_t d = n + k;
        Polyhedron Q = Polyhedron::orthant(d);
        auto lift = [&](const IntVec& a) {
          IntVec r = a;
          r.resize(d, Int(0));
          return r;
        };
        for (const auto& c : piece.cell.inequalities()) Q.add_inequality(lift(c.a), c.b);
        for (const auto& c : piece.cell.equalities()) Q.add_equality(lift(c.a), c.b);
        std::size_t col = n;
        for (std::size_t i = 0; i < n; ++i)
          for (long j = 0; j < e[i]; ++j, ++col) {
            IntVec lo = zero_vec(d), hi = zero_vec(d);
            lo[col] = 1;
            hi[i] = 1;
            hi[col] = -1;
            Q.add_inequality(lo, 1).add_inequality(hi, 0);
          }
        std::vector<IntVec> gens;
        for (std::size_t j = 0; j < n; ++j) gens.push_back(lift(piece.qp.lattice.basis_vector(j)));
        for (std::size_t j = n; j < d; ++j) {
          IntVec u = zero_vec(d);
          u[j] = 1;
          gens.push_back(u);
        }
        LatticeCoset coset(Lattice::from_generators(d, gens), lift(rep));
        std::vector<std::string> names = vars;
        for (std::size_t j = n; j < d; ++j) names.push_back("c" + std::to_string(j - n + 1));
        RationalGF f = gf_of_cell(SemilinearCell{Q, coset}, names);
        if (k > 0) {
          std::vector<std::size_t> counters;
          for (std::size_t j = n; j < d; ++j) counters.push_back(j);
          f = specialize_ones(f, counters);
        }
        total = total + f * coef;
      }
    }
  }
  return total;
}

inline RationalGF pqp_to_rgf(const PiecewiseQuasiPolynomial& g) { return pqp_to_rgf(g, detail::default_names(g.n)); }

// ---------------------------------------------------------------------------
// Univariate Hadamard product and zero test

inline UnivariateQP hadamard(const UnivariateQP& a, const UnivariateQP& b) {
  UnivariateQP r;
  r.threshold = std::max(a.threshold, b.threshold);
  for (long p = 0; p < r.threshold; ++p) r.initial.push_back(a.eval(p) * b.eval(p));
  r.period = std::lcm(a.period, b.period);
  for (long k = 0; k < r.period; ++k)
    r.constituents.push_back(a.constituents[static_cast<std::size_t>(k % a.period)] *
                             b.constituents[static_cast<std::size_t>(k % b.period)]);
  r.minimize();
  return r;
}

/// Series with coefficients f_p g_p.
inline RationalGF hadamard_univariate(const RationalGF& f, const RationalGF& g) {
  if (f.dim() != 1 || g.dim() != 1) throw SemanticError("hadamard_univariate expects univariate generating functions");
  return pqp_to_rgf(to_pqp(hadamard(univariate_qp(f), univariate_qp(g))), f.vars());
}

inline bool is_zero_univariate(const RationalGF& f) { return univariate_qp(f).is_zero(); }

// ---------------------------------------------------------------------------
// Vector partition functions

inline RationalGF vpf_gf(const std::vector<IntVec>& a) {
  if (a.empty()) throw SemanticError("vpf_gf: at least one vector required");
  const std::size_t n = a.front().size();
  for (const auto& v : a) {
    if (v.size() != n) throw SemanticError("vpf_gf: vectors have different dimensions");
    if (is_zero(v)) throw SemanticError("vpf_gf: zero vector is not allowed");
    for (const auto& x : v)
      if (x < 0) throw SemanticError("vpf_gf: vectors must lie in N^n");
  }
  RationalGF f(n);
  f.add_term({1, zero_vec(n), a});
  return f;
}

namespace detail {

/// #{lambda in N^d : sum lambda_i a_i = p} for p in [0,N]^2.
struct PartitionTable {
  long N;
  std::vector<Int> v;

  PartitionTable(const std::vector<IntVec>& a, long bound) : N(bound), v((bound + 1) * (bound + 1), Int(0)) {
    v[0] = 1;
    for (const auto& g : a) {
      long g0 = g[0].get_si(), g1 = g[1].get_si();
      for (long x = g0; x <= N; ++x)
        for (long y = g1; y <= N; ++y) v[idx(x, y)] += v[idx(x - g0, y - g1)];
    }
  }
  std::size_t idx(long x, long y) const { return static_cast<std::size_t>(x * (N + 1) + y); }
  Rat at(const IntVec& p) const { return Rat(v[idx(p[0].get_si(), p[1].get_si())]); }
};

inline Int cross(const IntVec& a, const IntVec& b) { return a[0] * b[1] - a[1] * b[0]; }

/// QP on Z^2 (lattice M Z^2) supported on the ray t*r, from the
/// per-residue polynomials in t (t = r.p / r.r on the ray).
inline QuasiPolynomial ray_qp(const IntVec& r, long M, const std::vector<Polynomial>& in_t) {
  QuasiPolynomial q{2, Lattice::scaled(2, M), {}};
  Int rr = dot(r, r);
  Polynomial t = Polynomial::affine({Rat(r[0]) / Rat(rr), Rat(r[1]) / Rat(rr)}, 0);
  for (const auto& rep : q.lattice.coset_representatives()) q.constituents[rep] = Polynomial(2);
  for (long s = 0; s < M; ++s) {
    IntVec rep = q.lattice.reduce(scale(r, Int(s)));
    q.constituents[rep] = in_t[static_cast<std::size_t>(s % static_cast<long>(in_t.size()))].compose({t});
  }
  return q;
}

}  // namespace detail

/// Vector partition function as a piecewise quasi-polynomial (n <= 2).
inline PiecewiseQuasiPolynomial vpf_pqp(const std::vector<IntVec>& a) {
  RationalGF f = vpf_gf(a);
  const std::size_t n = f.dim();
  if (n == 1) return rgf_to_pqp(f);
  if (n != 2) throw UnsupportedError("vector partition functions are implemented for n <= 2");
  const long d = static_cast<long>(a.size());

  // Distinct primitive ray directions, sorted by angle.
  std::vector<IntVec> rays;
  for (const auto& v : a) rays.push_back(primitive(v));
  std::sort(rays.begin(), rays.end(), [](const IntVec& x, const IntVec& y) { return detail::cross(x, y) > 0; });
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());

  long M = 1;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      Int c = abs(detail::cross(a[i], a[j]));
      if (c != 0) M = std::lcm(M, c.get_si());
    }

  PiecewiseQuasiPolynomial g{2, {}};
  if (rays.size() == 1) {
    // Every generator is a multiple k_i r of one primitive ray.
    const IntVec& r = rays.front();
    std::vector<IntVec> ks;
    for (const auto& v : a) ks.push_back({v[0] != 0 ? Int(v[0] / r[0]) : Int(v[1] / r[1])});
    UnivariateQP u = univariate_qp(vpf_gf(ks));
    Int rr = dot(r, r);
    IntVec normal{-r[1], r[0]};
    for (long i = 0; i < u.threshold; ++i) {
      Polyhedron P(2);
      P.add_equality(normal, 0).add_equality(r, rr * i);
      g.pieces.push_back({P, QuasiPolynomial::constant(2, u.initial[static_cast<std::size_t>(i)])});
    }
    Polyhedron P(2);
    P.add_equality(normal, 0).add_inequality(r, rr * u.threshold);
    g.pieces.push_back({P, detail::ray_qp(r, u.period, u.constituents)});
    return g;
  }

  const long chambers = static_cast<long>(rays.size()) - 1;
  const long D = d - 2, Dr = d - 1;
  const long V = std::max(12L, 3 * M);

  // Sample points, then one table large enough for all of them.
  struct Fit {
    std::vector<std::vector<IntVec>> points;  // per residue
  };
  std::vector<std::pair<long, long>> monomials;
  for (long s = 0; s <= D; ++s)
    for (long i = 0; i <= s; ++i) monomials.emplace_back(s - i, i);
  Lattice lat = Lattice::scaled(2, M);
  auto reps = lat.coset_representatives();
  std::vector<Fit> fits(static_cast<std::size_t>(chambers));
  long N = V;
  for (long c = 0; c < chambers; ++c) {
    const IntVec &u = rays[c], &v = rays[c + 1];
    IntVec w = add(u, v);
    for (const auto& rep : reps) {
      long s = 1;
      IntVec base;
      while (true) {
        base = add(rep, scale(w, Int(M * s)));
        if (detail::cross(u, base) > 0 && detail::cross(base, v) > 0) break;
        ++s;
      }
      std::vector<IntVec> pts;
      for (long tot = 0; tot <= D; ++tot)
        for (long i = 0; i <= tot; ++i) {
          IntVec p = add(base, add(scale(u, Int(M * (tot - i))), scale(v, Int(M * i))));
          pts.push_back(p);
          N = std::max({N, p[0].get_si(), p[1].get_si()});
        }
      fits[c].points.push_back(pts);
    }
  }
  for (const auto& r : rays)
    for (long t = 1; t <= M * (Dr + 1); ++t) N = std::max({N, Int(r[0] * t).get_si(), Int(r[1] * t).get_si()});
  detail::PartitionTable table(a, N);

  auto in_box = [&](const IntVec& p) { return p[0] <= V && p[1] <= V; };
  std::vector<QuasiPolynomial> chamber_qp;
  for (long c = 0; c < chambers; ++c) {
    QuasiPolynomial q{2, lat, {}};
    for (std::size_t k = 0; k < reps.size(); ++k) {
      const auto& pts = fits[c].points[k];
      std::vector<IntVec> rows;
      RatVec rhs;
      for (const auto& p : pts) {
        IntVec row;
        for (auto [e0, e1] : monomials) {
          Int x = 1;
          for (long i = 0; i < e0; ++i) x *= p[0];
          for (long i = 0; i < e1; ++i) x *= p[1];
          row.push_back(x);
        }
        rows.push_back(row);
        rhs.push_back(table.at(p));
      }
      auto sol = solve_rational(rows, rhs, monomials.size());
      if (!sol) throw std::logic_error("chamber interpolation is singular");
      Polynomial poly(2);
      for (std::size_t j = 0; j < monomials.size(); ++j) poly.add({monomials[j].first, monomials[j].second}, (*sol)[j]);
      q.constituents[reps[k]] = poly;
    }
    // validate on the open chamber
    const IntVec &u = rays[c], &v = rays[c + 1];
    for (long x = 0; x <= V; ++x)
      for (long y = 0; y <= V; ++y) {
        IntVec p{x, y};
        if (detail::cross(u, p) > 0 && detail::cross(p, v) > 0 && q.eval(p) != table.at(p))
          throw std::logic_error("chamber quasi-polynomial failed validation");
      }
    chamber_qp.push_back(q);
  }

  // Ray functions t -> g(t r), t >= 1.
  std::vector<std::vector<Polynomial>> ray_poly;
  for (const auto& r : rays) {
    std::vector<Polynomial> per;
    for (long s = 0; s < M; ++s) {
      long t0 = s == 0 ? M : s;
      std::vector<long> xs;
      std::vector<Rat> ys;
      for (long j = 0; j <= Dr; ++j) {
        xs.push_back(t0 + j * M);
        ys.push_back(table.at(scale(r, Int(t0 + j * M))));
      }
      per.push_back(detail::interpolate(xs, ys));
    }
    for (long t = 1; in_box(scale(r, Int(t))); ++t)
      if (per[static_cast<std::size_t>(t % M)].eval(RatVec{Rat(t)}) != table.at(scale(r, Int(t))))
        throw std::logic_error("ray quasi-polynomial failed validation");
    ray_poly.push_back(per);
  }

  // Attach each ray (and the origin) to an adjacent chamber whose
  // quasi-polynomial already agrees with it; otherwise keep it separate.
  auto agrees_on_ray = [&](const QuasiPolynomial& q, const IntVec& r) {
    for (long t = 1; in_box(scale(r, Int(t))); ++t)
      if (q.eval(scale(r, Int(t))) != table.at(scale(r, Int(t)))) return false;
    return true;
  };
  const std::size_t m = rays.size();
  std::vector<bool> lo_closed(chambers, false), hi_closed(chambers, false), ray_alone(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    long left = static_cast<long>(i) - 1, right = static_cast<long>(i);
    if (left >= 0 && agrees_on_ray(chamber_qp[left], rays[i])) hi_closed[left] = true;
    else if (right < chambers && agrees_on_ray(chamber_qp[right], rays[i])) lo_closed[right] = true;
    else ray_alone[i] = true;
  }
  long origin_home = -1;
  for (long c = 0; c < chambers; ++c)
    if (lo_closed[c] && hi_closed[c] && chamber_qp[c].eval({0, 0}) == 1) {
      origin_home = c;
      break;
    }
  for (long c = 0; c < chambers; ++c) {
    Polyhedron P(2);
    P.add_inequality(IntVec{-rays[c][1], rays[c][0]}, lo_closed[c] ? 0 : 1);          // cross(r_c, p)
    P.add_inequality(IntVec{rays[c + 1][1], -rays[c + 1][0]}, hi_closed[c] ? 0 : 1);  // cross(p, r_{c+1})
    if (lo_closed[c] && hi_closed[c] && origin_home != c) P.add_inequality({1, 1}, 1);
    g.pieces.push_back({P, chamber_qp[c]});
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!ray_alone[i]) continue;
    Polyhedron P(2);
    P.add_equality(IntVec{-rays[i][1], rays[i][0]}, 0).add_inequality({1, 1}, 1);
    g.pieces.push_back({P, detail::ray_qp(rays[i], M, ray_poly[i])});
  }
  if (origin_home < 0) {
    Polyhedron P(2);
    P.add_equality({1, 0}, 0).add_equality({0, 1}, 0);
    g.pieces.push_back({P, QuasiPolynomial::constant(2, 1)});
  }
  return g;
}

// ---------------------------------------------------------------------------
// Step-polynomials

/// sum_r [p = r mod m] q_r(p), with [p = r mod m] = floor((p-r)/m) - floor((p-r-1)/m).
inline StepPolynomial qp_to_step(const QuasiPolynomial& q) {
  if (q.n != 1) throw UnsupportedError("qp_to_step is implemented for univariate quasi-polynomials");
  const Int m = q.lattice.index();
  StepPolynomial s{1, {}};
  const AffineForm p_form{{Rat(1)}, 0};
  for (const auto& [rep, poly] : q.constituents) {
    for (const auto& [e, c] : poly.terms()) {
      std::vector<AffineForm> powers(static_cast<std::size_t>(e[0]), p_form);
      if (m == 1) {
        s.terms.push_back({c, powers});
        continue;
      }
      auto a = powers, b = powers;
      a.push_back({{Rat(1) / Rat(m)}, Rat(-rep[0]) / Rat(m)});
      b.push_back({{Rat(1) / Rat(m)}, Rat(-rep[0] - 1) / Rat(m)});
      s.terms.push_back({c, a});
      s.terms.push_back({-c, b});
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Synthesis of a counting formula

/// F(p; t, c0, c1..cK) with #{(t, c) in N^(K+2) : F} = g(p). Every counted
/// variable is bounded: t < tags, c0 <= max_multiplicity, c_j <= p.
struct SynthesizedFormula {
  Formula formula;
  std::string param;
  std::vector<std::string> counted;  ///< t, c0, c1, ..., cK
  long tags = 0;
  Int max_multiplicity = 0;
};

namespace detail {

inline std::vector<Rat> forward_differences(const Polynomial& h, long s0, long D) {
  std::vector<Rat> vals;
  for (long j = 0; j <= D; ++j) vals.push_back(h.eval(RatVec{Rat(s0 + j)}));
  std::vector<Rat> diffs;
  for (long k = 0; k <= D; ++k) {
    diffs.push_back(vals[0]);
    for (std::size_t j = 0; j + 1 < vals.size(); ++j) vals[j] = vals[j + 1] - vals[j];
    if (!vals.empty()) vals.pop_back();
  }
  return diffs;
}

}  // namespace detail

/// Each residue class r mod m of the eventual part is written in s = (p-r)/m
/// as sum_k beta_k C(s - s0, k) with all beta_k in N, where s0 is the first
/// point past which every forward difference is nonnegative; the values
/// before s0 become explicit point clauses. C(s - s0, k) counts
/// s0 < c1 < ... < ck <= s, and beta_k copies are indexed by 1 <= c0 <= beta_k.
inline SynthesizedFormula synth_formula(const PiecewiseQuasiPolynomial& g, const std::string& param = "p") {
  UnivariateQP u = univariate_form(g);
  const long m = u.period;

  auto reject = [&](long p, const Rat& v) {
    throw SemanticError("value " + to_string(v) + " at p = " + std::to_string(p) + " is not in N");
  };
  auto check_value = [&](long p, const Rat& v) {
    if (v < 0 || !is_integer(v)) reject(p, v);
  };

  struct Clause {
    long point = -1;  // p = point, or eventual clause when < 0
    long residue = 0, s0 = 0, k = 0;
    Int mult;
  };
  std::vector<Clause> clauses;
  long K = 0;
  for (long p = 0; p < u.threshold; ++p) {
    const Rat& v = u.initial[static_cast<std::size_t>(p)];
    check_value(p, v);
    if (v != 0) clauses.push_back({p, 0, 0, 0, v.get_num()});
  }
  for (long r = 0; r < m; ++r) {
    // h(s) = q_r(m s + r)
    Polynomial h = u.constituents[static_cast<std::size_t>(r)].compose({Polynomial::affine({Rat(m)}, Rat(r))});
    const long D = h.degree();
    long s_first = 0;
    while (m * s_first + r < u.threshold) ++s_first;
    if (D < 0) continue;
    long s0 = s_first;
    std::vector<Rat> beta;
    while (true) {
      Rat v = h.eval(RatVec{Rat(s0)});
      check_value(m * s0 + r, v);
      beta = detail::forward_differences(h, s0, D);
      bool ok = true;
      for (long k = 0; k <= D; ++k) {
        if (!is_integer(beta[k])) {
          for (long j = 0; j <= D; ++j) check_value(m * (s0 + j) + r, h.eval(RatVec{Rat(s0 + j)}));
          throw std::logic_error("integer-valued polynomial with non-integral differences");
        }
        if (beta[k] < 0) ok = false;
      }
      if (ok) break;
      if (v != 0) clauses.push_back({m * s0 + r, 0, 0, 0, v.get_num()});
      ++s0;
      if (s0 > s_first + 100000) throw SemanticError("synthesis did not find a nonnegative expansion");
    }
    for (long k = 0; k <= D; ++k) {
      if (beta[k] == 0) continue;
      clauses.push_back({-1, r, s0, k, beta[k].get_num()});
      K = std::max(K, k);
    }
  }

  SynthesizedFormula out;
  out.param = param;
  out.counted = {"t", "c0"};
  for (long j = 1; j <= K; ++j) out.counted.push_back("c" + std::to_string(j));
  const LinearTerm P = LinearTerm::variable(param);
  auto var = [&](const std::string& v) { return LinearTerm::variable(v); };
  auto num = [](const Int& x) { return LinearTerm::number(x); };
  std::vector<Formula> parts;
  long tag = 0;
  for (const auto& c : clauses) {
    std::vector<Formula> f;
    f.push_back(Formula::eq(var("t"), num(tag)));
    f.push_back(Formula::ge(var("c0"), num(1)));
    f.push_back(Formula::le(var("c0"), num(c.mult)));
    out.max_multiplicity = std::max(out.max_multiplicity, c.mult);
    long used = 0;
    if (c.point >= 0) {
      f.push_back(Formula::eq(P, num(c.point)));
    } else {
      f.push_back(Formula::ge(P, num(Int(m * c.s0 + c.residue))));
      if (m > 1) f.push_back(Formula::congruent(P, num(c.residue), m));
      used = c.k;
      for (long j = 1; j <= c.k; ++j) {
        const std::string cj = "c" + std::to_string(j);
        if (j == 1) f.push_back(Formula::ge(var(cj), num(c.s0 + 1)));
        else f.push_back(Formula::ge(var(cj), var("c" + std::to_string(j - 1)) + num(1)));
      }
      if (c.k > 0)  // m c_k <= p - r
        f.push_back(Formula::le(var("c" + std::to_string(c.k)) * Int(m), P - num(c.residue)));
    }
    for (long j = used + 1; j <= K; ++j) f.push_back(Formula::eq(var("c" + std::to_string(j)), num(0)));
    parts.push_back(Formula::conj(std::move(f)));
    ++tag;
  }
  out.tags = tag;
  out.formula = Formula::disj(std::move(parts));
  return out;
}

}  // namespace presburger
