#pragma once

// Text and JSON forms of generating functions, piecewise quasi-polynomials,
// step-polynomials and semilinear sets. JSON documents of generating
// functions and piecewise quasi-polynomials round-trip exactly.

#include "presburger/quasipoly.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

namespace presburger {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::string rat_field(const Rat& q) { return q.get_num().get_str() + "/" + q.get_den().get_str(); }

inline Rat parse_rat(const Json& j) {
  if (!j.is_string()) throw ParseError("expected a rational number as a \"num/den\" string");
  const std::string s = j.get<std::string>();
  Rat q;
  if (s.empty() || q.set_str(s, 10) != 0 || q.get_den() == 0) throw ParseError("malformed rational \"" + s + "\"");
  q.canonicalize();
  return q;
}

inline Json int_array(const IntVec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(x.get_si());
  return a;
}

inline IntVec parse_ints(const Json& j) {
  if (!j.is_array()) throw ParseError("expected an integer array");
  IntVec v;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw ParseError("expected an integer array");
    v.emplace_back(x.get<long>());
  }
  return v;
}

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline std::vector<std::string> parse_names(const Json& j) {
  if (!j.is_array()) throw ParseError("expected an array of variable names");
  std::vector<std::string> v;
  for (const auto& x : j) {
    if (!x.is_string()) throw ParseError("expected an array of variable names");
    v.push_back(x.get<std::string>());
  }
  return v;
}

inline Json parse_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte == 0 ? 0 : e.byte - 1);
  }
}

/// x^2*y, 1 for the zero exponent.
inline std::string monomial_text(const std::vector<std::string>& vars, const IntVec& e) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += vars[i];
    if (e[i] != 1) s += "^" + e[i].get_str();
  }
  return s.empty() ? "1" : s;
}

/// coef * body with sign handling; returns (negative, magnitude text).
inline std::pair<bool, std::string> scaled_text(const Rat& c, const std::string& body) {
  Rat a = abs(c);
  if (body == "1") return {c < 0, to_string(a)};
  if (a == 1) return {c < 0, body};
  return {c < 0, to_string(a) + "*" + body};
}

inline std::string join_signed(const std::vector<std::pair<bool, std::string>>& parts) {
  if (parts.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& [neg, text] = parts[i];
    if (i == 0) s += neg ? "-" + text : text;
    else s += (neg ? " - " : " + ") + text;
  }
  return s;
}

inline std::string linear_text(const std::vector<std::string>& vars, const IntVec& a) {
  std::vector<std::pair<bool, std::string>> parts;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) parts.push_back(scaled_text(Rat(a[i]), vars[i]));
  return join_signed(parts);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Generating functions

inline std::string to_text(const RationalGF& f) {
  std::vector<std::pair<bool, std::string>> parts;
  for (const auto& t : f.terms()) {
    auto [neg, num] = detail::scaled_text(t.coef, detail::monomial_text(f.vars(), t.numer_exp));
    if (!t.denom.empty()) {
      std::vector<std::string> factors;
      for (std::size_t i = 0; i < t.denom.size();) {
        std::size_t j = i;
        while (j < t.denom.size() && t.denom[j] == t.denom[i]) ++j;
        std::string fac = "(1 - " + detail::monomial_text(f.vars(), t.denom[i]) + ")";
        if (j - i > 1) fac += "^" + std::to_string(j - i);
        factors.push_back(fac);
        i = j;
      }
      std::string den = factors.front();
      for (std::size_t i = 1; i < factors.size(); ++i) den += "*" + factors[i];
      if (factors.size() > 1) den = "(" + den + ")";
      if (num.find_first_of("*+") != std::string::npos) num = "(" + num + ")";
      num += "/" + den;
    }
    parts.emplace_back(neg, num);
  }
  return detail::join_signed(parts);
}

inline Json to_json(const RationalGF& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms()) {
    Json den = Json::array();
    for (const auto& b : t.denom) den.push_back(detail::int_array(b));
    terms.push_back(Json{{"coef", detail::rat_field(t.coef)}, {"numer_exp", detail::int_array(t.numer_exp)}, {"denom", den}});
  }
  return Json{{"type", "gf"}, {"vars", f.vars()}, {"terms", terms}};
}

inline RationalGF gf_from_json(const Json& j) {
  RationalGF f(detail::parse_names(detail::field(j, "vars")));
  std::vector<GFTerm> ts;
  const Json& terms = detail::field(j, "terms");
  if (!terms.is_array()) throw ParseError("\"terms\" must be an array");
  for (const auto& t : terms) {
    GFTerm term{detail::parse_rat(detail::field(t, "coef")), detail::parse_ints(detail::field(t, "numer_exp")), {}};
    const Json& den = detail::field(t, "denom");
    if (!den.is_array()) throw ParseError("\"denom\" must be an array");
    for (const auto& b : den) term.denom.push_back(detail::parse_ints(b));
    ts.push_back(std::move(term));
  }
  try {
    f.add_terms(std::move(ts));
  } catch (const SemanticError& e) {
    throw ParseError(e.what());
  }
  return f;
}

inline RationalGF gf_from_json(const std::string& text) { return gf_from_json(detail::parse_document(text)); }

// ---------------------------------------------------------------------------
// Polynomials and quasi-polynomials

inline std::string to_text(const Polynomial& p, const std::vector<std::string>& vars) {
  std::vector<std::pair<Polynomial::Exponent, Rat>> terms(p.terms().begin(), p.terms().end());
  auto deg = [](const Polynomial::Exponent& e) { return std::accumulate(e.begin(), e.end(), 0L); };
  std::stable_sort(terms.begin(), terms.end(), [&](const auto& a, const auto& b) {
    if (deg(a.first) != deg(b.first)) return deg(a.first) > deg(b.first);
    return a.first > b.first;
  });
  std::vector<std::pair<bool, std::string>> parts;
  for (const auto& [e, c] : terms) {
    IntVec ie(e.begin(), e.end());
    parts.push_back(detail::scaled_text(c, detail::monomial_text(vars, ie)));
  }
  return detail::join_signed(parts);
}

inline std::string cell_text(const Polyhedron& P, const std::vector<std::string>& vars) {
  std::vector<std::string> parts;
  for (const auto& c : P.inequalities()) {
    bool implied = c.b <= 0 && std::all_of(c.a.begin(), c.a.end(), [](const Int& x) { return x >= 0; });
    if (implied) continue;
    parts.push_back(detail::linear_text(vars, c.a) + " >= " + c.b.get_str());
  }
  for (const auto& c : P.equalities()) parts.push_back(detail::linear_text(vars, c.a) + " = " + c.b.get_str());
  if (parts.empty()) return "all";
  std::string s = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) s += " & " + parts[i];
  return s;
}

inline std::string coset_text(const LatticeCoset& c, const std::vector<std::string>& vars) {
  std::string s;
  for (const auto& k : c.congruences()) {
    if (!s.empty()) s += " & ";
    s += detail::linear_text(vars, k.coeffs) + " % " + k.modulus.get_str() + " = " + k.residue.get_str();
  }
  return s;
}

/// One line per (piece, constituent): "cell [& congruences]: polynomial".
inline std::string to_text(const PiecewiseQuasiPolynomial& g, const std::vector<std::string>& vars) {
  std::ostringstream out;
  for (const auto& piece : g.pieces) {
    std::string cell = cell_text(piece.cell, vars);
    for (const auto& [rep, poly] : piece.qp.constituents) {
      std::string cond = coset_text(LatticeCoset(piece.qp.lattice, rep), vars);
      std::string head = cell == "all" ? (cond.empty() ? "all" : cond) : (cond.empty() ? cell : cell + " & " + cond);
      out << head << ": " << to_text(poly, vars) << "\n";
    }
  }
  return out.str();
}

inline Json to_json(const Polynomial& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back(Json{{"exp", e}, {"coef", detail::rat_field(c)}});
  return terms;
}

inline Polynomial polynomial_from_json(const Json& j, std::size_t n) {
  if (!j.is_array()) throw ParseError("polynomial must be an array of terms");
  Polynomial p(n);
  for (const auto& t : j) {
    IntVec e = detail::parse_ints(detail::field(t, "exp"));
    if (e.size() != n) throw ParseError("polynomial exponent has the wrong dimension");
    Polynomial::Exponent ex;
    for (const auto& x : e) {
      if (x < 0) throw ParseError("polynomial exponents must be nonnegative");
      ex.push_back(x.get_si());
    }
    p.add(ex, detail::parse_rat(detail::field(t, "coef")));
  }
  return p;
}

inline Json to_json(const Polyhedron& P) {
  Json ineq = Json::array(), eq = Json::array();
  for (const auto& c : P.inequalities()) ineq.push_back(Json{{"a", detail::int_array(c.a)}, {"b", c.b.get_si()}});
  for (const auto& c : P.equalities()) eq.push_back(Json{{"a", detail::int_array(c.a)}, {"b", c.b.get_si()}});
  return Json{{"inequalities", ineq}, {"equalities", eq}};
}

inline Polyhedron polyhedron_from_json(const Json& j, std::size_t n) {
  Polyhedron P(n);
  auto rows = [&](const char* key, bool equality) {
    const Json& arr = detail::field(j, key);
    if (!arr.is_array()) throw ParseError(std::string("\"") + key + "\" must be an array");
    for (const auto& c : arr) {
      IntVec a = detail::parse_ints(detail::field(c, "a"));
      const Json& b = detail::field(c, "b");
      if (a.size() != n || !b.is_number_integer()) throw ParseError("malformed constraint");
      if (equality) P.add_equality(a, b.get<long>());
      else P.add_inequality(a, b.get<long>());
    }
  };
  rows("inequalities", false);
  rows("equalities", true);
  return P;
}

inline Json to_json(const PiecewiseQuasiPolynomial& g, const std::vector<std::string>& vars) {
  Json pieces = Json::array();
  for (const auto& piece : g.pieces) {
    Json basis = Json::array();
    for (std::size_t i = 0; i < g.n; ++i) basis.push_back(detail::int_array(piece.qp.lattice.basis_vector(i)));
    Json cons = Json::array();
    for (const auto& [rep, poly] : piece.qp.constituents)
      cons.push_back(Json{{"rep", detail::int_array(rep)}, {"terms", to_json(poly)}});
    pieces.push_back(Json{{"cell", to_json(piece.cell)}, {"lattice", basis}, {"constituents", cons}});
  }
  return Json{{"type", "pqp"}, {"vars", vars}, {"pieces", pieces}};
}

struct NamedPQP {
  std::vector<std::string> vars;
  PiecewiseQuasiPolynomial pqp;
};

inline NamedPQP pqp_from_json(const Json& j) {
  NamedPQP out;
  out.vars = detail::parse_names(detail::field(j, "vars"));
  const std::size_t n = out.vars.size();
  out.pqp.n = n;
  const Json& pieces = detail::field(j, "pieces");
  if (!pieces.is_array()) throw ParseError("\"pieces\" must be an array");
  for (const auto& p : pieces) {
    Polyhedron cell = polyhedron_from_json(detail::field(p, "cell"), n);
    const Json& basis = detail::field(p, "lattice");
    std::vector<IntVec> gens;
    if (!basis.is_array() || basis.size() != n) throw ParseError("lattice basis must have n vectors");
    for (const auto& b : basis) {
      gens.push_back(detail::parse_ints(b));
      if (gens.back().size() != n) throw ParseError("lattice vector has the wrong dimension");
    }
    QuasiPolynomial q{n, Lattice(n), {}};
    try {
      q.lattice = Lattice::from_generators(n, gens);
    } catch (const std::invalid_argument&) {
      throw ParseError("lattice basis is not full rank");
    }
    const Json& cons = detail::field(p, "constituents");
    if (!cons.is_array()) throw ParseError("\"constituents\" must be an array");
    for (const auto& c : cons) {
      IntVec rep = detail::parse_ints(detail::field(c, "rep"));
      if (rep.size() != n) throw ParseError("coset representative has the wrong dimension");
      q.constituents[q.lattice.reduce(rep)] = polynomial_from_json(detail::field(c, "terms"), n);
    }
    out.pqp.pieces.push_back({std::move(cell), std::move(q)});
  }
  return out;
}

inline NamedPQP pqp_from_json(const std::string& text) { return pqp_from_json(detail::parse_document(text)); }

// ---------------------------------------------------------------------------
// Step-polynomials

inline std::string floor_text(const AffineForm& f, const std::vector<std::string>& vars) {
  bool plain = is_integer(f.constant) &&
               std::all_of(f.coeffs.begin(), f.coeffs.end(), [](const Rat& c) { return is_integer(c); });
  std::vector<std::pair<bool, std::string>> parts;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i)
    if (f.coeffs[i] != 0) parts.push_back(detail::scaled_text(f.coeffs[i], vars[i]));
  if (f.constant != 0) parts.push_back(detail::scaled_text(f.constant, "1"));
  std::string body = detail::join_signed(parts);
  if (plain) return parts.size() == 1 ? body : "(" + body + ")";
  return "floor(" + body + ")";
}

inline std::string to_text(const StepPolynomial& s, const std::vector<std::string>& vars) {
  std::vector<std::pair<bool, std::string>> parts;
  for (const auto& t : s.terms) {
    std::string body;
    for (const auto& f : t.factors) body += (body.empty() ? "" : "*") + floor_text(f, vars);
    parts.push_back(detail::scaled_text(t.coef, body.empty() ? "1" : body));
  }
  return detail::join_signed(parts);
}

inline Json to_json(const StepPolynomial& s) {
  Json terms = Json::array();
  for (const auto& t : s.terms) {
    Json floors = Json::array();
    for (const auto& f : t.factors) {
      Json form = Json::array();
      for (const auto& c : f.coeffs) form.push_back(detail::rat_field(c));
      form.push_back(detail::rat_field(f.constant));
      floors.push_back(form);
    }
    terms.push_back(Json{{"coef", detail::rat_field(t.coef)}, {"floors", floors}});
  }
  return Json{{"type", "step"}, {"n", s.n}, {"terms", terms}};
}

// ---------------------------------------------------------------------------
// Semilinear sets

inline std::string to_text(const SemilinearSet& S) {
  std::ostringstream out;
  if (S.cells.empty()) out << "empty\n";
  for (const auto& c : S.cells) {
    std::string cell = cell_text(c.polyhedron, S.vars);
    std::string cong = coset_text(c.coset, S.vars);
    if (cell == "all") cell = cong.empty() ? "all" : cong;
    else if (!cong.empty()) cell += " & " + cong;
    out << cell << "\n";
  }
  return out.str();
}

inline Json to_json(const SemilinearSet& S) {
  Json cells = Json::array();
  for (const auto& c : S.cells) {
    Json basis = Json::array();
    for (std::size_t i = 0; i < S.dim(); ++i) basis.push_back(detail::int_array(c.coset.lattice().basis_vector(i)));
    cells.push_back(Json{{"polyhedron", to_json(c.polyhedron)}, {"lattice", basis}, {"rep", detail::int_array(c.coset.rep())}});
  }
  return Json{{"type", "semilinear"}, {"vars", S.vars}, {"cells", cells}};
}

}  // namespace presburger
