#pragma once

// Semilinear sets: disjoint unions of (rational polyhedron) ∩ (lattice coset)
// cells in N^d, and the conversions to and from quantifier-free formulas.

#include "presburger/qelim.hpp"

namespace presburger {

struct SemilinearCell {
  Polyhedron polyhedron;
  LatticeCoset coset;

  bool contains(const IntVec& v) const { return coset.contains(v) && polyhedron.contains(v); }
};

struct SemilinearSet {
  std::vector<std::string> vars;
  std::vector<SemilinearCell> cells;

  std::size_t dim() const { return vars.size(); }
};

inline bool membership(const SemilinearSet& S, const IntVec& v) {
  if (v.size() != S.dim()) throw SemanticError("membership: point has dimension " + std::to_string(v.size()) +
                                               ", set has dimension " + std::to_string(S.dim()));
  for (const auto& x : v)
    if (x < 0) throw SemanticError("membership: point is not in N^d");
  for (const auto& c : S.cells)
    if (c.contains(v)) return true;
  return false;
}

namespace detail {

/// A distinct hyperplane or congruence class occurring in the formula, with
/// the atoms describing each of its branches.
struct SplitKey {
  std::vector<Atom> branches;
};

/// Where an atom of g lives: key index and the branches on which it holds.
struct AtomPlace {
  std::size_t key;
  std::vector<bool> holds;
};

inline bool first_coeff_negative(const LinearTerm& t) { return !t.coeffs.empty() && t.coeffs.begin()->second < 0; }

/// Kleene evaluation of g under a partial branch assignment.
inline std::optional<bool> eval_partial(const Formula& g, const std::map<Atom, AtomPlace>& place,
                                        const std::vector<long>& branch) {
  using K = Formula::Kind;
  switch (g.kind()) {
    case K::True:
      return true;
    case K::False:
      return false;
    case K::Atom: {
      const auto& p = place.at(g.atom_value());
      long b = branch[p.key];
      if (b < 0) return std::nullopt;
      return p.holds[static_cast<std::size_t>(b)];
    }
    case K::Not: {
      auto v = eval_partial(g.body(), place, branch);
      if (!v) return v;
      return !*v;
    }
    case K::And:
    case K::Or: {
      const bool is_and = g.kind() == K::And;
      bool unknown = false;
      for (const auto& c : g.children()) {
        auto v = eval_partial(c, place, branch);
        if (!v) unknown = true;
        else if (*v != is_and) return !is_and;
      }
      if (unknown) return std::nullopt;
      return is_and;
    }
    default:
      throw SemanticError("to_dnf expects a quantifier-free formula");
  }
}

}  // namespace detail

/// Disjoint cells whose union is {u in N^d : g(u)}. Each cell is one
/// consistent choice of branch per atom hyperplane (sign vector), emitted as
/// soon as g is decided on it.
inline SemilinearSet to_dnf(const Formula& g, const std::vector<std::string>& vars) {
  if (!is_quantifier_free(g)) throw SemanticError("to_dnf expects a quantifier-free formula");
  {
    std::set<std::string> known(vars.begin(), vars.end());
    for (const auto& v : free_vars(g))
      if (!known.count(v)) throw SemanticError("free variable '" + v + "' is not in the variable list");
  }
  using detail::AtomPlace;
  std::vector<detail::SplitKey> keys;
  std::map<std::pair<int, LinearTerm>, std::size_t> key_index;  // (kind, term) -> key
  std::map<std::pair<LinearTerm, Int>, std::size_t> congr_index;
  std::map<Atom, AtomPlace> place;
  const LinearTerm one = LinearTerm::number(1);

  for_each_atom(g, [&](const Atom& a) {
    if (place.count(a)) return;
    if (const auto* c = std::get_if<Comparison>(&a)) {
      if (c->rel == Rel::Le) {
        bool flip = detail::first_coeff_negative(c->term);
        LinearTerm k = flip ? -c->term + one : c->term;
        auto [it, fresh] = key_index.try_emplace({0, k}, keys.size());
        if (fresh) keys.push_back({{Comparison{k, Rel::Le}, Comparison{-k + one, Rel::Le}}});
        place[a] = AtomPlace{it->second, {!flip, flip}};
      } else {
        const LinearTerm& k = c->term;
        auto [it, fresh] = key_index.try_emplace({1, k}, keys.size());
        if (fresh)
          keys.push_back({{Comparison{k + one, Rel::Le}, Comparison{k, Rel::Eq}, Comparison{-k + one, Rel::Le}}});
        place[a] = AtomPlace{it->second, {false, true, false}};
      }
    } else {
      const auto& d = std::get<Divisibility>(a);
      auto [it, fresh] = congr_index.try_emplace({d.term, d.modulus}, keys.size());
      if (fresh) {
        detail::SplitKey key;
        for (Int r = 0; r < d.modulus; ++r) key.branches.push_back(Divisibility{d.term, d.modulus, r});
        keys.push_back(std::move(key));
      }
      std::vector<bool> holds(d.modulus.get_ui(), false);
      holds[d.residue.get_ui()] = true;
      place[a] = AtomPlace{it->second, holds};
    }
  });

  SemilinearSet S{vars, {}};
  std::vector<long> branch(keys.size(), -1);
  std::function<void(std::size_t, const Conjunction&)> dfs = [&](std::size_t next, const Conjunction& conj) {
    auto v = detail::eval_partial(g, place, branch);
    if (v && !*v) return;
    if (v && *v) {
      LinearSystem sys = linear_system(conj, vars);
      auto coset = solve_congruences(sys.congruences, vars.size());
      if (coset) S.cells.push_back({std::move(sys.polyhedron), std::move(*coset)});
      return;
    }
    for (std::size_t b = 0; b < keys[next].branches.size(); ++b) {
      Conjunction c = conj;
      if (!detail::add_atom(c, keys[next].branches[b])) continue;
      if (!plausibly_satisfiable(c)) continue;
      branch[next] = static_cast<long>(b);
      dfs(next + 1, c);
      branch[next] = -1;
    }
  };
  dfs(0, Conjunction{});
  return S;
}

/// Decomposition of the solution set of an arbitrary formula.
inline SemilinearSet semilinear_from_formula(const Formula& f, const std::vector<std::string>& vars) {
  return to_dnf(qelim(f), vars);
}

inline SemilinearSet semilinear_from_formula(const Formula& f) { return semilinear_from_formula(f, free_vars_ordered(f)); }

/// Quantifier-free formula with the same solution set in N^d.
inline Formula formula_from_semilinear(const SemilinearSet& S) {
  auto linear = [&](const IntVec& a) {
    LinearTerm t;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != 0) t += LinearTerm::variable(S.vars[i], a[i]);
    return t;
  };
  std::vector<Formula> cells;
  for (const auto& c : S.cells) {
    std::vector<Formula> parts;
    for (const auto& row : c.polyhedron.inequalities()) {
      bool implied = row.b <= 0 && std::all_of(row.a.begin(), row.a.end(), [](const Int& x) { return x >= 0; });
      if (implied) continue;
      parts.push_back(Formula::ge(linear(row.a), LinearTerm::number(row.b)));
    }
    for (const auto& row : c.polyhedron.equalities())
      parts.push_back(Formula::eq(linear(row.a), LinearTerm::number(row.b)));
    for (const auto& k : c.coset.congruences())
      parts.push_back(Formula::congruent(linear(k.coeffs), LinearTerm::number(k.residue), k.modulus));
    cells.push_back(Formula::conj(std::move(parts)));
  }
  return Formula::disj(std::move(cells));
}

/// Number of hyperplane arrangement regions bound: sum_{i<=d} C(N, i).
inline Int arrangement_bound(std::size_t d, std::size_t N) {
  Int total = 0;
  for (std::size_t i = 0; i <= d && i <= N; ++i) {
    Int c;
    mpz_bin_uiui(c.get_mpz_t(), N, i);
    total += c;
  }
  return total;
}

}  // namespace presburger
