#pragma once

// Quantifier elimination for extended Presburger formulas over N (Cooper's
// method over Z with the nonnegativity of every variable made explicit).

#include "presburger/formula.hpp"
#include "presburger/polyhedron.hpp"

#include <limits>
#include <optional>
#include <set>

namespace presburger {

/// A conjunction of normalized atoms.
using Conjunction = std::set<Atom>;

namespace detail {

/// Adds an atom, applying normalization and the sign constraints of N.
/// Returns false when the conjunction became unsatisfiable.
inline bool add_atom(Conjunction& c, const Atom& raw) {
  Formula f = Formula::atom(raw);
  if (f.is_true()) return true;
  if (f.is_false()) return false;
  const Atom& a = f.atom_value();
  if (const auto* cmp = std::get_if<Comparison>(&a); cmp && cmp->rel == Rel::Le) {
    // sum c_i x_i + k <= 0 over N: decided when all c_i share a sign.
    bool all_nonpos = true, all_nonneg = true;
    for (const auto& [v, k] : cmp->term.coeffs) {
      if (k > 0) all_nonpos = false;
      if (k < 0) all_nonneg = false;
    }
    if (all_nonpos && cmp->term.constant <= 0) return true;
    if (all_nonneg && cmp->term.constant > 0) return false;
    for (auto it = c.begin(); it != c.end(); ++it) {
      const auto* old = std::get_if<Comparison>(&*it);
      if (!old || old->rel != Rel::Le || old->term.coeffs != cmp->term.coeffs) continue;
      if (old->term.constant >= cmp->term.constant) return true;
      c.erase(it);
      break;
    }
  }
  if (const auto* cmp = std::get_if<Comparison>(&a); cmp && cmp->rel == Rel::Eq) {
    bool all_pos = true;
    for (const auto& [v, k] : cmp->term.coeffs)
      if (k < 0) all_pos = false;
    if (all_pos && cmp->term.constant > 0) return false;
  }
  c.insert(a);
  return true;
}

inline std::vector<std::string> conjunction_vars(const Conjunction& c) {
  std::set<std::string> vs;
  for (const auto& a : c)
    for (const auto& [v, k] : atom_term(a).coeffs) vs.insert(v);
  return {vs.begin(), vs.end()};
}

}  // namespace detail

/// Linear part of a conjunction over the given variable order: the polyhedron
/// (with x >= 0 for every variable) and the congruence atoms.
struct LinearSystem {
  Polyhedron polyhedron;
  std::vector<Congruence> congruences;
};

inline LinearSystem linear_system(const Conjunction& c, const std::vector<std::string>& vars) {
  const std::size_t d = vars.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < d; ++i) index[vars[i]] = i;
  auto row = [&](const LinearTerm& t) {
    IntVec a = zero_vec(d);
    for (const auto& [v, k] : t.coeffs) {
      auto it = index.find(v);
      if (it == index.end()) throw SemanticError("variable '" + v + "' is not in the variable list");
      a[it->second] = k;
    }
    return a;
  };
  LinearSystem s{Polyhedron::orthant(d), {}};
  for (const auto& a : c) {
    if (const auto* cmp = std::get_if<Comparison>(&a)) {
      IntVec r = row(cmp->term);
      if (cmp->rel == Rel::Le) s.polyhedron.add_inequality(negate(r), cmp->term.constant);
      else s.polyhedron.add_equality(r, -cmp->term.constant);
    } else {
      const auto& dv = std::get<Divisibility>(a);
      s.congruences.push_back({row(dv.term), dv.residue, dv.modulus});
    }
  }
  return s;
}

/// Necessary condition for satisfiability over N: rational feasibility of the
/// linear part and solvability of the congruences.
inline bool plausibly_satisfiable(const Conjunction& c) {
  auto vars = detail::conjunction_vars(c);
  LinearSystem s = linear_system(c, vars);
  if (!solve_congruences(s.congruences, vars.size())) return false;
  return is_feasible(s.polyhedron);
}

inline Formula to_formula(const Conjunction& c) {
  std::vector<Formula> parts;
  for (const auto& a : c) parts.push_back(Formula::atom(a));
  return Formula::conj(std::move(parts));
}

inline Formula to_formula(const std::vector<Conjunction>& dnf) {
  std::vector<Formula> parts;
  for (const auto& c : dnf) parts.push_back(to_formula(c));
  return Formula::disj(std::move(parts));
}

namespace detail {
struct DnfTooLarge {};
}  // namespace detail

/// Disjunctive normal form of a quantifier-free formula, dropping
/// conjunctions that fail plausibly_satisfiable. False gives no conjunctions.
/// Returns nullopt once an intermediate result exceeds `limit` conjunctions.
inline std::optional<std::vector<Conjunction>> try_dnf_conjunctions(const Formula& g, std::size_t limit) {
  if (!is_quantifier_free(g)) throw SemanticError("dnf of a quantified formula");
  std::function<std::vector<Conjunction>(const Formula&)> rec = [&](const Formula& f) -> std::vector<Conjunction> {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::True:
        return {Conjunction{}};
      case K::False:
        return {};
      case K::Atom: {
        Conjunction c;
        if (!detail::add_atom(c, f.atom_value())) return {};
        return {c};
      }
      case K::Or: {
        std::set<Conjunction> seen;
        std::vector<Conjunction> out;
        for (const auto& ch : f.children())
          for (auto& c : rec(ch))
            if (seen.insert(c).second) out.push_back(std::move(c));
        if (out.size() > limit) throw detail::DnfTooLarge{};
        return out;
      }
      case K::And: {
        std::vector<Conjunction> acc{Conjunction{}};
        for (const auto& ch : f.children()) {
          auto part = rec(ch);
          std::vector<Conjunction> next;
          std::set<Conjunction> seen;
          for (const auto& a : acc)
            for (const auto& b : part) {
              Conjunction m = a;
              bool ok = true;
              for (const auto& at : b) ok = ok && detail::add_atom(m, at);
              if (ok && plausibly_satisfiable(m) && seen.insert(m).second) next.push_back(std::move(m));
            }
          acc = std::move(next);
          if (acc.size() > limit) throw detail::DnfTooLarge{};
          if (acc.empty()) break;
        }
        return acc;
      }
      default:
        throw SemanticError("dnf expects negation normal form");
    }
  };
  std::vector<Conjunction> out;
  try {
    for (auto& c : rec(nnf(g)))
      if (plausibly_satisfiable(c)) out.push_back(std::move(c));
  } catch (const detail::DnfTooLarge&) {
    return std::nullopt;
  }
  return out;
}

inline std::vector<Conjunction> dnf_conjunctions(const Formula& g) {
  return *try_dnf_conjunctions(g, std::numeric_limits<std::size_t>::max());
}

namespace detail {

/// Term with x's coefficient replaced: returns (coefficient of x, rest).
inline std::pair<Int, LinearTerm> split(const LinearTerm& t, const std::string& x) {
  LinearTerm rest = t;
  Int c = rest.coeff(x);
  rest.coeffs.erase(x);
  return {c, rest};
}

/// Atom `a` multiplied through by k > 0 (coefficient of x included).
inline Atom scaled(const Atom& a, const Int& k) {
  if (const auto* cmp = std::get_if<Comparison>(&a)) return Comparison{cmp->term * k, cmp->rel};
  const auto& d = std::get<Divisibility>(a);
  return Divisibility{d.term * k, d.modulus * k, d.residue * k};
}

/// Replaces the variable x (coefficient c) by c * t.
inline Atom substituted(const Atom& a, const std::string& x, const LinearTerm& t) {
  if (const auto* cmp = std::get_if<Comparison>(&a)) return Comparison{cmp->term.substitute(x, t), cmp->rel};
  const auto& d = std::get<Divisibility>(a);
  return Divisibility{d.term.substitute(x, t), d.modulus, d.residue};
}

/// Exists x >= 0 with all atoms of c, as a list of conjunctions free of x.
inline std::vector<Conjunction> eliminate(const Conjunction& c, const std::string& x) {
  std::vector<Atom> with;
  Conjunction without;
  for (const auto& a : c) {
    if (atom_term(a).coeff(x) != 0) with.push_back(a);
    else without.insert(a);
  }
  if (with.empty()) return {without};
  with.push_back(Comparison{LinearTerm::variable(x, -1), Rel::Le});

  auto finish = [&](const std::vector<Atom>& extra, std::vector<Conjunction>& out) {
    Conjunction r = without;
    for (const auto& a : extra)
      if (!add_atom(r, a)) return;
    if (plausibly_satisfiable(r)) out.push_back(std::move(r));
  };

  // An equality a x + t = 0 determines x = -t / a.
  for (const auto& a : with) {
    const auto* cmp = std::get_if<Comparison>(&a);
    if (!cmp || cmp->rel != Rel::Eq) continue;
    auto [ax, t] = split(cmp->term, x);
    Int abs_a = abs(ax);
    Int sgn = ax > 0 ? 1 : -1;
    LinearTerm image = t * Int(-sgn);  // equals |a| x
    std::vector<Atom> extra;
    if (abs_a > 1) extra.push_back(Divisibility{t, abs_a, 0});
    for (const auto& b : with) {
      if (&b == &a) continue;
      // |a| * b, then |a| x := image
      Atom sb = scaled(b, abs_a);
      auto [cx, rest] = split(atom_term(sb), x);
      Int per = cx / abs_a;  // coefficient on |a| x
      LinearTerm nt = rest + image * per;
      if (const auto* bc = std::get_if<Comparison>(&sb)) extra.push_back(Comparison{nt, bc->rel});
      else {
        const auto& bd = std::get<Divisibility>(sb);
        extra.push_back(Divisibility{nt, bd.modulus, bd.residue});
      }
    }
    std::vector<Conjunction> out;
    finish(extra, out);
    return out;
  }

  // Normalize the coefficient of x to +-l and substitute x' = l x.
  Int l = 1;
  for (const auto& a : with) l = lcm(l, abs(atom_term(a).coeff(x)));
  std::vector<Atom> unit;  // atoms with x' coefficient +-1
  std::vector<LinearTerm> lower, upper;
  Int delta = l;
  for (const auto& a : with) {
    Int cx = atom_term(a).coeff(x);
    Atom s = scaled(a, l / abs(cx));
    // coefficient of x in s is +-l; rewrite as +-1 on x'
    std::visit([&](auto& v) { v.term.coeffs[x] = cx > 0 ? 1 : -1; }, s);
    unit.push_back(s);
    if (const auto* cmp = std::get_if<Comparison>(&s)) {
      auto [ux, rest] = split(cmp->term, x);
      if (ux < 0) lower.push_back(rest);  // x' >= rest
      else upper.push_back(-rest);        // x' <= -rest
    } else {
      delta = lcm(delta, std::get<Divisibility>(s).modulus);
    }
  }
  if (l > 1) unit.push_back(Divisibility{LinearTerm::variable(x), l, 0});

  std::vector<Conjunction> out;
  auto instantiate = [&](const LinearTerm& value) {
    std::vector<Atom> extra;
    for (const auto& a : unit) extra.push_back(substituted(a, x, value));
    finish(extra, out);
  };
  if (upper.empty()) {
    // Only lower bounds: x' can be taken large, so only residues matter.
    std::vector<Atom> congr;
    for (const auto& a : unit)
      if (std::holds_alternative<Divisibility>(a)) congr.push_back(a);
    for (Int j = 0; j < delta; ++j) {
      std::vector<Atom> extra;
      for (const auto& a : congr) extra.push_back(substituted(a, x, LinearTerm::number(j)));
      finish(extra, out);
    }
  } else if (upper.size() < lower.size()) {
    for (const auto& u : upper)
      for (Int j = 0; j < delta; ++j) instantiate(u - LinearTerm::number(j));
  } else {
    for (const auto& b : lower)
      for (Int j = 0; j < delta; ++j) instantiate(b + LinearTerm::number(j));
  }
  std::set<Conjunction> seen;
  std::vector<Conjunction> uniq;
  for (auto& r : out)
    if (seen.insert(r).second) uniq.push_back(std::move(r));
  return uniq;
}

/// Bottom-up cleanup: N-sign folding of atoms, duplicate removal, and
/// pruning of conjunctions whose atoms are jointly unsatisfiable.
inline Formula simplify(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom: {
      Conjunction c;
      if (!add_atom(c, f.atom_value())) return Formula::truth(false);
      return c.empty() ? Formula::truth(true) : Formula::atom(*c.begin());
    }
    case K::And:
    case K::Or: {
      std::vector<Formula> parts;
      std::set<std::string> seen;
      Conjunction atoms;
      bool is_and = f.kind() == K::And;
      for (const auto& ch : f.children()) {
        Formula s = simplify(ch);
        if (is_and && s.is_false()) return s;
        if (!is_and && s.is_true()) return s;
        if (!seen.insert(to_string(s)).second) continue;
        if (is_and && s.kind() == K::Atom) atoms.insert(s.atom_value());
        parts.push_back(s);
      }
      if (is_and && atoms.size() > 1 && !plausibly_satisfiable(atoms)) return Formula::truth(false);
      if (is_and) {
        // bound tightening: of t + c <= 0 with the same t keep the largest c
        std::map<std::map<std::string, Int>, Int> tightest;
        for (const auto& a : atoms)
          if (const auto* c = std::get_if<Comparison>(&a); c && c->rel == Rel::Le) {
            auto [it, fresh] = tightest.try_emplace(c->term.coeffs, c->term.constant);
            if (!fresh && c->term.constant > it->second) it->second = c->term.constant;
          }
        std::erase_if(parts, [&](const Formula& p) {
          if (p.kind() != K::Atom) return false;
          const auto* c = std::get_if<Comparison>(&p.atom_value());
          return c && c->rel == Rel::Le && c->term.constant < tightest.at(c->term.coeffs);
        });
      }
      return is_and ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
    }
    case K::Not:
      return Formula::negation(simplify(f.body()));
    default:
      return f;
  }
}

/// Cooper's elimination applied to a whole negation-normal-form formula.
inline Formula exists_nnf(const std::string& x, const Formula& F0) {
  Formula F = Formula::conj({F0, Formula::atom(Comparison{LinearTerm::variable(x, -1), Rel::Le})});

  // A top-level equality a x + t = 0 determines x.
  std::optional<Comparison> pivot;
  {
    std::vector<Formula> top = F.kind() == Formula::Kind::And ? F.children() : std::vector<Formula>{F};
    for (const auto& ch : top) {
      if (ch.kind() != Formula::Kind::Atom) continue;
      const auto* cmp = std::get_if<Comparison>(&ch.atom_value());
      if (!cmp || cmp->rel != Rel::Eq || cmp->term.coeff(x) == 0) continue;
      if (!pivot || abs(cmp->term.coeff(x)) < abs(pivot->term.coeff(x))) pivot = *cmp;
    }
  }
  if (pivot) {
    auto [ax, t] = split(pivot->term, x);
    Int abs_a = abs(ax);
    LinearTerm image = t * Int(ax > 0 ? -1 : 1);  // equals |a| x
    Formula G = map_atoms(F, [&](const Atom& b) -> Formula {
      if (atom_term(b).coeff(x) == 0) return Formula::atom(b);
      Atom sb = scaled(b, abs_a);
      auto [cx, rest] = split(atom_term(sb), x);
      LinearTerm nt = rest + image * Int(cx / abs_a);
      if (const auto* bc = std::get_if<Comparison>(&sb)) return Formula::atom(Comparison{nt, bc->rel});
      const auto& bd = std::get<Divisibility>(sb);
      return Formula::atom(Divisibility{nt, bd.modulus, bd.residue});
    });
    return simplify(Formula::conj({Formula::atom(Divisibility{t, abs_a, 0}), G}));
  }

  Int l = 1;
  for_each_atom(F, [&](const Atom& a) {
    Int cx = atom_term(a).coeff(x);
    if (cx != 0) l = lcm(l, abs(cx));
  });
  Int delta = l;
  std::vector<LinearTerm> lower, upper;
  std::set<LinearTerm> seen_lower, seen_upper;
  Formula U = map_atoms(F, [&](const Atom& a) -> Formula {
    Int cx = atom_term(a).coeff(x);
    if (cx == 0) return Formula::atom(a);
    Atom s = scaled(a, l / abs(cx));
    std::visit([&](auto& v) { v.term.coeffs[x] = cx > 0 ? 1 : -1; }, s);
    if (const auto* cmp = std::get_if<Comparison>(&s)) {
      auto [ux, rest] = split(cmp->term, x);
      LinearTerm bound = ux < 0 ? rest : -rest;
      bool is_lower = cmp->rel == Rel::Eq || ux < 0;
      bool is_upper = cmp->rel == Rel::Eq || ux > 0;
      if (is_lower && seen_lower.insert(bound).second) lower.push_back(bound);
      if (is_upper && seen_upper.insert(bound).second) upper.push_back(bound);
    } else {
      delta = lcm(delta, std::get<Divisibility>(s).modulus);
    }
    return Formula(Formula::atom(s));
  });
  if (l > 1) U = Formula::conj({U, Formula::atom(Divisibility{LinearTerm::variable(x), l, 0})});

  auto at = [&](const Formula& G, const LinearTerm& value) {
    return simplify(map_atoms(G, [&](const Atom& a) { return Formula::atom(substituted(a, x, value)); }));
  };
  std::vector<Formula> parts;
  if (upper.size() < lower.size()) {
    Formula plus_inf = map_atoms(U, [&](const Atom& a) -> Formula {
      Int cx = atom_term(a).coeff(x);
      if (cx == 0 || std::holds_alternative<Divisibility>(a)) return Formula::atom(a);
      const auto& cmp = std::get<Comparison>(a);
      if (cmp.rel == Rel::Eq) return Formula::truth(false);
      return Formula::truth(cx < 0);
    });
    for (Int j = 0; j < delta; ++j) parts.push_back(at(plus_inf, LinearTerm::number(j)));
    for (const auto& u : upper)
      for (Int j = 0; j < delta; ++j) parts.push_back(at(U, u - LinearTerm::number(j)));
  } else {
    for (const auto& b : lower)
      for (Int j = 0; j < delta; ++j) parts.push_back(at(U, b + LinearTerm::number(j)));
  }
  return simplify(Formula::disj(std::move(parts)));
}

/// Conjunction count above which elimination works on the formula directly
/// instead of on its disjunctive normal form.
inline constexpr std::size_t dnf_limit = 64;

inline Formula exists_qf(const std::string& x, const Formula& body) {
  if (!free_vars(body).count(x)) return body;
  auto dnf = try_dnf_conjunctions(body, dnf_limit);
  if (!dnf) return exists_nnf(x, simplify(nnf(body)));
  std::vector<Conjunction> result;
  std::set<Conjunction> seen;
  for (const auto& c : *dnf)
    for (auto& r : eliminate(c, x)) {
      if (r.empty()) return Formula::truth(true);
      if (seen.insert(r).second) result.push_back(std::move(r));
    }
  return to_formula(result);
}

}  // namespace detail

/// Equivalent quantifier-free formula (over N).
inline Formula qelim(const Formula& f) {
  if (is_quantifier_free(f)) return f;
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Not:
      return nnf(Formula::negation(qelim(f.body())));
    case K::And:
    case K::Or: {
      std::vector<Formula> cs;
      for (const auto& c : f.children()) cs.push_back(qelim(c));
      return f.kind() == K::And ? Formula::conj(std::move(cs)) : Formula::disj(std::move(cs));
    }
    case K::Exists:
      return detail::exists_qf(f.bound_var(), qelim(f.body()));
    case K::ForAll:
      return nnf(Formula::negation(detail::exists_qf(f.bound_var(), Formula::negation(qelim(f.body())))));
    default:
      return f;
  }
}

/// Removes one quantifier whose body is quantifier-free (the first such in
/// depth-first order); formulas without quantifiers are returned unchanged.
inline Formula eliminate_innermost(const Formula& f) {
  bool done = false;
  std::function<Formula(const Formula&)> rec = [&](const Formula& g) -> Formula {
    if (done || is_quantifier_free(g)) return g;
    using K = Formula::Kind;
    switch (g.kind()) {
      case K::Exists:
      case K::ForAll:
        if (is_quantifier_free(g.body())) {
          done = true;
          return qelim(g);
        }
        return g.kind() == K::Exists ? Formula::exists(g.bound_var(), rec(g.body()))
                                     : Formula::forall(g.bound_var(), rec(g.body()));
      case K::Not:
        return Formula::negation(rec(g.body()));
      case K::And:
      case K::Or: {
        std::vector<Formula> cs;
        for (const auto& c : g.children()) cs.push_back(rec(c));
        return g.kind() == K::And ? Formula::conj(std::move(cs)) : Formula::disj(std::move(cs));
      }
      default:
        return g;
    }
  };
  return rec(f);
}

/// Truth value of a sentence over N.
inline bool decide(const Formula& f) {
  auto fv = free_vars_ordered(f);
  if (!fv.empty()) throw SemanticError("decide: formula has free variable '" + fv.front() + "'");
  Formula g = qelim(f);
  if (g.is_true()) return true;
  if (g.is_false()) return false;
  // Ground atoms fold during construction; anything left is a logic error.
  return eval_ground(g, {}, 0);
}

}  // namespace presburger
