#pragma once

// Exact rational polyhedra in H-representation: Fourier-Motzkin projection
// and feasibility, vertex and extreme-ray enumeration, tangent cones, and
// triangulation of cones.

#include "presburger/exact.hpp"

#include <map>
#include <set>

namespace presburger {

/// a . x >= b (inequality) or a . x = b (equality).
struct Constraint {
  IntVec a;
  Int b;
  bool operator==(const Constraint&) const = default;
};

class Polyhedron {
public:
  Polyhedron() = default;
  explicit Polyhedron(std::size_t d) : dim_(d) {}

  /// {x in R^d : x >= 0}
  static Polyhedron orthant(std::size_t d) {
    Polyhedron p(d);
    for (std::size_t i = 0; i < d; ++i) {
      IntVec e = zero_vec(d);
      e[i] = 1;
      p.add_inequality(e, 0);
    }
    return p;
  }

  std::size_t dim() const { return dim_; }
  const std::vector<Constraint>& inequalities() const { return ineqs_; }
  const std::vector<Constraint>& equalities() const { return eqs_; }

  Polyhedron& add_inequality(IntVec a, Int b) {
    check(a);
    ineqs_.push_back({std::move(a), std::move(b)});
    return *this;
  }
  Polyhedron& add_equality(IntVec a, Int b) {
    check(a);
    eqs_.push_back({std::move(a), std::move(b)});
    return *this;
  }

  bool contains(const RatVec& x) const {
    if (x.size() != dim_) throw std::invalid_argument("point dimension mismatch");
    for (const auto& c : ineqs_)
      if (dot(c.a, x) < Rat(c.b)) return false;
    for (const auto& c : eqs_)
      if (dot(c.a, x) != Rat(c.b)) return false;
    return true;
  }
  bool contains(const IntVec& x) const { return contains(to_rat(x)); }

  /// Constraint rows (inequalities then equalities), ignoring right-hand sides.
  std::vector<IntVec> rows() const {
    std::vector<IntVec> r;
    for (const auto& c : ineqs_) r.push_back(c.a);
    for (const auto& c : eqs_) r.push_back(c.a);
    return r;
  }

private:
  void check(const IntVec& a) const {
    if (a.size() != dim_) throw std::invalid_argument("constraint dimension mismatch");
  }

  std::size_t dim_ = 0;
  std::vector<Constraint> ineqs_;
  std::vector<Constraint> eqs_;
};

/// Pointed cone apex + cone(generators); generators primitive.
struct Cone {
  RatVec apex;
  std::vector<IntVec> generators;
};

// ---------------------------------------------------------------------------
// Fourier-Motzkin

namespace detail {

inline Constraint normalized(Constraint c) {
  Int g = gcd(content(c.a), c.b);
  if (g > 1) {
    for (auto& x : c.a) x /= g;
    c.b /= g;
  }
  return c;
}

/// Drops trivially true rows, keeps the tightest of parallel inequalities.
/// Returns false when a row 0 >= b with b > 0 (or 0 = b, b != 0) appears.
inline bool tidy(std::vector<Constraint>& ineqs, std::vector<Constraint>& eqs) {
  std::map<IntVec, Rat> tightest;  // primitive normal -> largest b / g
  for (auto& c : ineqs) {
    if (is_zero(c.a)) {
      if (c.b > 0) return false;
      continue;
    }
    Int g = content(c.a);
    IntVec n = c.a;
    for (auto& x : n) x /= g;
    Rat rhs = make_rat(c.b, g);
    auto it = tightest.find(n);
    if (it == tightest.end() || it->second < rhs) tightest[n] = rhs;
  }
  ineqs.clear();
  for (const auto& [n, rhs] : tightest) {
    IntVec a = n;
    for (auto& x : a) x *= rhs.get_den();
    ineqs.push_back(normalized({a, rhs.get_num()}));
  }
  std::vector<Constraint> kept;
  std::set<std::pair<IntVec, Int>> seen;
  for (auto& c : eqs) {
    if (is_zero(c.a)) {
      if (c.b != 0) return false;
      continue;
    }
    Constraint n = normalized(c);
    if (lex_positive(n.a) == false) {
      n.a = negate(n.a);
      n.b = -n.b;
    }
    if (seen.insert({n.a, n.b}).second) kept.push_back(n);
  }
  eqs = std::move(kept);
  // Opposite inequalities a.x >= b and -a.x >= -b' with b > b' are infeasible.
  for (const auto& c : ineqs) {
    Int g = content(c.a);
    IntVec n = c.a;
    for (auto& x : n) x /= g;
    auto it = tightest.find(negate(n));
    if (it != tightest.end() && make_rat(c.b, g) + it->second > 0) return false;
  }
  return true;
}

inline IntVec drop_index(const IntVec& a, std::size_t k) {
  IntVec r;
  r.reserve(a.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (i != k) r.push_back(a[i]);
  return r;
}

/// Eliminates variable k; rows keep their length (column k becomes zero).
/// Returns false on detected infeasibility.
inline bool eliminate(std::vector<Constraint>& ineqs, std::vector<Constraint>& eqs, std::size_t k) {
  auto pivot = std::find_if(eqs.begin(), eqs.end(), [&](const Constraint& c) { return c.a[k] != 0; });
  if (pivot != eqs.end()) {
    Constraint e = *pivot;
    eqs.erase(pivot);
    Int ev = e.a[k];
    Int sgn = ev > 0 ? 1 : -1;
    Int aev = abs(ev);
    auto combine = [&](Constraint& c) {
      if (c.a[k] == 0) return;
      Int cv = c.a[k];
      for (std::size_t i = 0; i < c.a.size(); ++i) c.a[i] = aev * c.a[i] - sgn * cv * e.a[i];
      c.b = aev * c.b - sgn * cv * e.b;
    };
    for (auto& c : ineqs) combine(c);
    for (auto& c : eqs) combine(c);
    return tidy(ineqs, eqs);
  }
  std::vector<Constraint> lower, upper, rest;
  for (auto& c : ineqs) {
    if (c.a[k] > 0) lower.push_back(c);
    else if (c.a[k] < 0) upper.push_back(c);
    else rest.push_back(c);
  }
  for (const auto& l : lower)
    for (const auto& u : upper) {
      Int lu = -u.a[k], ll = l.a[k];
      Constraint c{IntVec(l.a.size()), lu * l.b + ll * u.b};
      for (std::size_t i = 0; i < c.a.size(); ++i) c.a[i] = lu * l.a[i] + ll * u.a[i];
      rest.push_back(normalized(c));
    }
  ineqs = std::move(rest);
  return tidy(ineqs, eqs);
}

}  // namespace detail

/// Projection of P onto the remaining coordinates after eliminating `var`
/// (result has dimension d - 1).
inline Polyhedron fm_project(const Polyhedron& P, std::size_t var) {
  if (var >= P.dim()) throw std::invalid_argument("fm_project: variable out of range");
  auto ineqs = P.inequalities();
  auto eqs = P.equalities();
  bool ok = detail::tidy(ineqs, eqs) && detail::eliminate(ineqs, eqs, var);
  Polyhedron R(P.dim() - 1);
  if (!ok) {
    R.add_inequality(zero_vec(P.dim() - 1), 1);
    return R;
  }
  for (const auto& c : ineqs) R.add_inequality(detail::drop_index(c.a, var), c.b);
  for (const auto& c : eqs) R.add_equality(detail::drop_index(c.a, var), c.b);
  return R;
}

/// Rational feasibility by full Fourier-Motzkin elimination.
inline bool is_feasible(const Polyhedron& P) {
  auto ineqs = P.inequalities();
  auto eqs = P.equalities();
  if (!detail::tidy(ineqs, eqs)) return false;
  std::vector<bool> done(P.dim(), false);
  for (std::size_t step = 0; step < P.dim(); ++step) {
    // Prefer equalities, then the variable with the fewest generated rows.
    std::size_t best = P.dim();
    long best_cost = -1;
    for (std::size_t k = 0; k < P.dim(); ++k) {
      if (done[k]) continue;
      bool in_eq = std::any_of(eqs.begin(), eqs.end(), [&](const Constraint& c) { return c.a[k] != 0; });
      long lo = 0, up = 0;
      for (const auto& c : ineqs) {
        if (c.a[k] > 0) ++lo;
        else if (c.a[k] < 0) ++up;
      }
      long cost = in_eq ? -1 : lo * up - lo - up;
      if (best == P.dim() || cost < best_cost) {
        best = k;
        best_cost = cost;
      }
    }
    done[best] = true;
    if (!detail::eliminate(ineqs, eqs, best)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Rays, vertices, cones

namespace detail {

/// Calls fn(subset) for each k-subset of {0..n-1} in lexicographic order.
template <class Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  while (true) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

/// Generators of {y : a.y >= 0 (a in ineq_rows), e.y = 0 (e in eq_rows)}.
/// Extreme rays come first; a lineality space contributes +/- basis vectors.
inline std::vector<IntVec> cone_generators(const std::vector<IntVec>& ineq_rows, std::vector<IntVec> eq_rows,
                                           std::size_t d) {
  std::vector<IntVec> all = ineq_rows;
  all.insert(all.end(), eq_rows.begin(), eq_rows.end());
  auto lineality = nullspace(all, d);
  for (const auto& l : lineality) eq_rows.push_back(l);
  std::size_t re = rank(eq_rows, d);
  std::set<IntVec> found;
  std::vector<IntVec> rays;
  if (re < d) {
    std::size_t need = d - 1 - re;
    detail::for_each_subset(ineq_rows.size(), need, [&](const std::vector<std::size_t>& s) {
      std::vector<IntVec> sys = eq_rows;
      for (auto i : s) sys.push_back(ineq_rows[i]);
      auto ker = nullspace(sys, d);
      if (ker.size() != 1) return;
      IntVec r = ker.front();
      bool pos = true, neg = true;
      for (const auto& a : ineq_rows) {
        Int v = dot(a, r);
        if (v < 0) pos = false;
        if (v > 0) neg = false;
      }
      if (!pos && !neg) return;
      if (!pos) r = negate(r);
      if (found.insert(r).second) rays.push_back(r);
    });
  }
  for (const auto& l : lineality) {
    rays.push_back(l);
    rays.push_back(negate(l));
  }
  return rays;
}

inline bool is_pointed(const Polyhedron& P) { return nullspace(P.rows(), P.dim()).empty(); }

/// Recession cone {y : y + P subset of P} at apex 0.
inline Cone recession_cone(const Polyhedron& P) {
  std::vector<IntVec> ineq_rows, eq_rows;
  for (const auto& c : P.inequalities()) ineq_rows.push_back(c.a);
  for (const auto& c : P.equalities()) eq_rows.push_back(c.a);
  return Cone{RatVec(P.dim(), Rat(0)), cone_generators(ineq_rows, eq_rows, P.dim())};
}

/// All vertices of a pointed polyhedron (empty when P is empty).
inline std::vector<RatVec> vertices(const Polyhedron& P) {
  const std::size_t d = P.dim();
  if (!is_pointed(P)) throw SemanticError("non-pointed polyhedron");
  std::vector<IntVec> eq_rows;
  RatVec eq_rhs;
  for (const auto& c : P.equalities()) {
    eq_rows.push_back(c.a);
    eq_rhs.push_back(Rat(c.b));
  }
  std::size_t re = rank(eq_rows, d);
  std::set<RatVec> seen;
  std::vector<RatVec> out;
  const auto& ineqs = P.inequalities();
  detail::for_each_subset(ineqs.size(), d - re, [&](const std::vector<std::size_t>& s) {
    std::vector<IntVec> sys = eq_rows;
    RatVec rhs = eq_rhs;
    for (auto i : s) {
      sys.push_back(ineqs[i].a);
      rhs.push_back(Rat(ineqs[i].b));
    }
    if (rank(sys, d) != d) return;
    auto x = solve_rational(sys, rhs, d);
    if (!x || !P.contains(*x)) return;
    if (seen.insert(*x).second) out.push_back(*x);
  });
  return out;
}

/// Dimension of the affine hull of a pointed polyhedron; -1 when empty.
inline long affine_dimension(const Polyhedron& P) {
  auto verts = vertices(P);
  if (verts.empty()) return -1;
  std::vector<IntVec> dirs = recession_cone(P).generators;
  for (std::size_t i = 1; i < verts.size(); ++i) {
    RatVec diff(P.dim());
    for (std::size_t k = 0; k < P.dim(); ++k) diff[k] = verts[i][k] - verts[0][k];
    dirs.push_back(primitive_direction(diff));
  }
  return static_cast<long>(rank(dirs, P.dim()));
}

/// Cone of feasible directions of P at the vertex v.
inline Cone tangent_cone(const Polyhedron& P, const RatVec& v) {
  if (!P.contains(v)) throw SemanticError("tangent_cone: point is not in the polyhedron");
  std::vector<IntVec> active, eq_rows;
  for (const auto& c : P.inequalities())
    if (dot(c.a, v) == Rat(c.b)) active.push_back(c.a);
  for (const auto& c : P.equalities()) eq_rows.push_back(c.a);
  std::vector<IntVec> all = active;
  all.insert(all.end(), eq_rows.begin(), eq_rows.end());
  if (rank(all, P.dim()) != P.dim()) throw SemanticError("tangent_cone: point is not a vertex");
  return Cone{v, cone_generators(active, eq_rows, P.dim())};
}

namespace detail {

/// Normal of the hyperplane spanned by r-1 independent vectors in R^r.
inline IntVec facet_normal(const std::vector<IntVec>& vecs, std::size_t r) {
  auto ker = nullspace(vecs, r);
  return ker.front();
}

inline IntVec select(const IntVec& v, const std::vector<std::size_t>& coords) {
  IntVec r;
  for (auto c : coords) r.push_back(v[c]);
  return r;
}

}  // namespace detail

/// Placing triangulation of a pointed cone into simplicial cones over its own
/// generators; the pieces share the apex and meet only along common faces.
inline std::vector<Cone> triangulate(const Cone& C) {
  const auto& gens = C.generators;
  if (gens.empty()) return {C};
  const std::size_t d = gens.front().size();
  const std::size_t r = rank(gens, d);
  if (gens.size() == r) return {C};

  // Coordinates on which the projection is injective on span(gens).
  std::vector<std::size_t> coords;
  {
    std::vector<IntVec> cols;  // coordinate rows of the generator matrix
    for (std::size_t i = 0; i < d && coords.size() < r; ++i) {
      IntVec row;
      for (const auto& g : gens) row.push_back(g[i]);
      cols.push_back(row);
      if (rank(cols, gens.size()) == coords.size() + 1) coords.push_back(i);
      else cols.pop_back();
    }
  }
  std::vector<IntVec> pts;
  for (const auto& g : gens) pts.push_back(detail::select(g, coords));

  using Simplex = std::vector<std::size_t>;
  std::vector<Simplex> simplices;
  Simplex first;
  {
    std::vector<IntVec> chosen;
    for (std::size_t i = 0; i < pts.size() && first.size() < r; ++i) {
      chosen.push_back(pts[i]);
      if (rank(chosen, r) == chosen.size()) first.push_back(i);
      else chosen.pop_back();
    }
  }
  simplices.push_back(first);
  std::set<std::size_t> placed(first.begin(), first.end());

  for (std::size_t q = 0; q < pts.size(); ++q) {
    if (placed.count(q)) continue;
    // Boundary facets: (r-1)-subsets occurring in exactly one simplex.
    std::map<Simplex, std::pair<int, std::size_t>> facets;  // facet -> (count, opposite vertex)
    for (const auto& s : simplices) {
      for (std::size_t drop = 0; drop < s.size(); ++drop) {
        Simplex f;
        for (std::size_t i = 0; i < s.size(); ++i)
          if (i != drop) f.push_back(s[i]);
        auto& e = facets[f];
        ++e.first;
        e.second = s[drop];
      }
    }
    std::vector<Simplex> added;
    for (const auto& [f, info] : facets) {
      if (info.first != 1) continue;
      std::vector<IntVec> fv;
      for (auto i : f) fv.push_back(pts[i]);
      IntVec n = detail::facet_normal(fv, r);
      if (dot(n, pts[info.second]) < 0) n = negate(n);
      if (dot(n, pts[q]) < 0) {
        Simplex s = f;
        s.push_back(q);
        std::sort(s.begin(), s.end());
        added.push_back(s);
      }
    }
    simplices.insert(simplices.end(), added.begin(), added.end());
    placed.insert(q);
  }

  std::vector<Cone> out;
  for (const auto& s : simplices) {
    Cone c{C.apex, {}};
    for (auto i : s) c.generators.push_back(gens[i]);
    out.push_back(std::move(c));
  }
  return out;
}

/// For a simplicial cone with linearly independent generators g_i and a
/// reference direction xi in the interior of the cone being decomposed, flags
/// the facets (opposite g_i) that are excluded in the half-open decomposition.
/// Ties n.xi = 0 are broken lexicographically by the coordinates of n.
inline std::vector<bool> open_facets(const std::vector<IntVec>& gens, const RatVec& xi) {
  const std::size_t k = gens.size();
  const std::size_t d = xi.size();
  std::vector<bool> open(k, false);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<IntVec> others;
    for (std::size_t j = 0; j < k; ++j)
      if (j != i) others.push_back(gens[j]);
    // Normal within span(gens): orthogonal to the other generators, not to g_i.
    std::vector<IntVec> sys = others;
    auto comp = nullspace(gens, d);  // orthogonal complement of the span
    sys.insert(sys.end(), comp.begin(), comp.end());
    auto ker = nullspace(sys, d);
    IntVec n = ker.front();
    if (dot(n, gens[i]) < 0) n = negate(n);
    Rat s = dot(n, xi);
    bool positive;
    if (s != 0) {
      positive = s > 0;
    } else {
      positive = lex_positive(n);
    }
    open[i] = !positive;
  }
  return open;
}

}  // namespace presburger
