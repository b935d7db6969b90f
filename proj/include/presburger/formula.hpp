#pragma once

// Extended Presburger formulas over N-valued variables: linear terms, atoms,
// the formula AST, parsing, printing and a bounded brute-force evaluator.

#include "presburger/exact.hpp"

#include <cctype>
#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace presburger {

// ---------------------------------------------------------------------------
// Linear terms

/// sum(coeffs[v] * v) + constant. Zero coefficients are never stored.
struct LinearTerm {
  std::map<std::string, Int> coeffs;
  Int constant = 0;

  static LinearTerm variable(const std::string& v, const Int& k = 1) {
    LinearTerm t;
    if (k != 0) t.coeffs[v] = k;
    return t;
  }
  static LinearTerm number(const Int& c) {
    LinearTerm t;
    t.constant = c;
    return t;
  }

  bool is_constant() const { return coeffs.empty(); }

  Int coeff(const std::string& v) const {
    auto it = coeffs.find(v);
    return it == coeffs.end() ? Int(0) : it->second;
  }

  LinearTerm& operator+=(const LinearTerm& o) {
    for (const auto& [v, k] : o.coeffs) {
      Int& c = coeffs[v];
      c += k;
      if (c == 0) coeffs.erase(v);
    }
    constant += o.constant;
    return *this;
  }
  LinearTerm operator+(const LinearTerm& o) const {
    LinearTerm r = *this;
    r += o;
    return r;
  }
  LinearTerm operator*(const Int& k) const {
    LinearTerm r;
    if (k == 0) return r;
    for (const auto& [v, c] : coeffs) r.coeffs[v] = c * k;
    r.constant = constant * k;
    return r;
  }
  LinearTerm operator-() const { return *this * Int(-1); }
  LinearTerm operator-(const LinearTerm& o) const { return *this + (-o); }

  /// Replaces v by t.
  LinearTerm substitute(const std::string& v, const LinearTerm& t) const {
    Int k = coeff(v);
    if (k == 0) return *this;
    LinearTerm r = *this;
    r.coeffs.erase(v);
    return r + t * k;
  }

  Int evaluate(const std::map<std::string, Int>& env) const {
    Int s = constant;
    for (const auto& [v, k] : coeffs) {
      auto it = env.find(v);
      if (it == env.end()) throw SemanticError("no value assigned to variable '" + v + "'");
      s += k * it->second;
    }
    return s;
  }

  bool operator==(const LinearTerm&) const = default;
  std::weak_ordering operator<=>(const LinearTerm& o) const {
    if (coeffs != o.coeffs) return coeffs < o.coeffs ? std::weak_ordering::less : std::weak_ordering::greater;
    if (constant != o.constant) return constant < o.constant ? std::weak_ordering::less : std::weak_ordering::greater;
    return std::weak_ordering::equivalent;
  }
};

// ---------------------------------------------------------------------------
// Atoms

enum class Rel { Le, Eq };

/// term <= 0 or term = 0, integer-tightened (coefficient gcd is 1). Equalities
/// have a positive first coefficient.
struct Comparison {
  LinearTerm term;
  Rel rel = Rel::Le;
  bool operator==(const Comparison&) const = default;
  std::weak_ordering operator<=>(const Comparison&) const = default;
};

/// sum(coeffs) == residue (mod modulus); coefficients and residue reduced into
/// [0, modulus), term constant is zero, modulus >= 2.
struct Divisibility {
  LinearTerm term;
  Int modulus;
  Int residue;
  bool operator==(const Divisibility&) const = default;
  std::weak_ordering operator<=>(const Divisibility&) const = default;
};

using Atom = std::variant<Comparison, Divisibility>;

inline const LinearTerm& atom_term(const Atom& a) {
  return std::visit([](const auto& x) -> const LinearTerm& { return x.term; }, a);
}

inline bool atom_holds(const Atom& a, const std::map<std::string, Int>& env) {
  if (const auto* c = std::get_if<Comparison>(&a)) {
    Int v = c->term.evaluate(env);
    return c->rel == Rel::Le ? v <= 0 : v == 0;
  }
  const auto& d = std::get<Divisibility>(a);
  return mod(d.term.evaluate(env) - d.residue, d.modulus) == 0;
}

// ---------------------------------------------------------------------------
// Formula

class Formula {
public:
  enum class Kind { True, False, Atom, And, Or, Not, Exists, ForAll };

  Formula() : Formula(truth(true)) {}

  static Formula truth(bool value) {
    static const Formula t(std::make_shared<Node>(Node{Kind::True, {}, {}, {}}));
    static const Formula f(std::make_shared<Node>(Node{Kind::False, {}, {}, {}}));
    return value ? t : f;
  }

  /// Normalizes the atom; constant atoms fold to True/False.
  static Formula atom(Atom a);

  static Formula le(const LinearTerm& lhs, const LinearTerm& rhs) { return atom(Comparison{lhs - rhs, Rel::Le}); }
  static Formula ge(const LinearTerm& lhs, const LinearTerm& rhs) { return le(rhs, lhs); }
  static Formula eq(const LinearTerm& lhs, const LinearTerm& rhs) { return atom(Comparison{lhs - rhs, Rel::Eq}); }
  /// lhs == rhs (mod m)
  static Formula congruent(const LinearTerm& lhs, const LinearTerm& rhs, const Int& m) {
    if (m < 1) throw SemanticError("congruence modulus must be at least 1");
    LinearTerm t = lhs - rhs;
    Int r = -t.constant;
    t.constant = 0;
    return atom(Divisibility{t, m, r});
  }

  static Formula conj(std::vector<Formula> fs) { return junction(Kind::And, std::move(fs)); }
  static Formula disj(std::vector<Formula> fs) { return junction(Kind::Or, std::move(fs)); }
  static Formula negation(const Formula& f) {
    if (f.kind() == Kind::True) return truth(false);
    if (f.kind() == Kind::False) return truth(true);
    return Formula(std::make_shared<Node>(Node{Kind::Not, {}, {f}, {}}));
  }
  static Formula exists(const std::string& v, const Formula& body) { return quantifier(Kind::Exists, v, body); }
  static Formula forall(const std::string& v, const Formula& body) { return quantifier(Kind::ForAll, v, body); }

  Kind kind() const { return node_->kind; }
  bool is_true() const { return kind() == Kind::True; }
  bool is_false() const { return kind() == Kind::False; }
  bool is_quantifier() const { return kind() == Kind::Exists || kind() == Kind::ForAll; }
  const Atom& atom_value() const { return node_->atom; }
  const std::vector<Formula>& children() const { return node_->children; }
  const Formula& body() const { return node_->children.front(); }
  const std::string& bound_var() const { return node_->var; }

  bool operator==(const Formula& o) const {
    if (node_ == o.node_) return true;
    if (kind() != o.kind()) return false;
    switch (kind()) {
      case Kind::True:
      case Kind::False:
        return true;
      case Kind::Atom:
        return atom_value() == o.atom_value();
      case Kind::Exists:
      case Kind::ForAll:
        if (bound_var() != o.bound_var()) return false;
        [[fallthrough]];
      default:
        return children() == o.children();
    }
  }

private:
  struct Node {
    Kind kind;
    Atom atom;
    std::vector<Formula> children;
    std::string var;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Formula junction(Kind k, std::vector<Formula> fs) {
    const Kind absorbing = k == Kind::And ? Kind::False : Kind::True;
    const Kind neutral = k == Kind::And ? Kind::True : Kind::False;
    std::vector<Formula> flat;
    for (auto& f : fs) {
      if (f.kind() == absorbing) return f;
      if (f.kind() == neutral) continue;
      if (f.kind() == k) {
        for (const auto& c : f.children()) flat.push_back(c);
      } else {
        flat.push_back(std::move(f));
      }
    }
    if (flat.empty()) return truth(k == Kind::And);
    if (flat.size() == 1) return flat.front();
    return Formula(std::make_shared<Node>(Node{k, {}, std::move(flat), {}}));
  }

  static Formula quantifier(Kind k, const std::string& v, const Formula& body) {
    return Formula(std::make_shared<Node>(Node{k, {}, {body}, v}));
  }

  std::shared_ptr<const Node> node_;
};

inline Formula Formula::atom(Atom a) {
  if (auto* c = std::get_if<Comparison>(&a)) {
    LinearTerm& t = c->term;
    if (t.is_constant()) return truth(c->rel == Rel::Le ? t.constant <= 0 : t.constant == 0);
    Int g = 0;
    for (const auto& [v, k] : t.coeffs) g = gcd(g, k);
    if (c->rel == Rel::Le) {
      for (auto& [v, k] : t.coeffs) k /= g;
      t.constant = ceil_div(t.constant, g);
    } else {
      if (!divides(g, t.constant)) return truth(false);
      if (t.coeffs.begin()->second < 0) g = -g;
      for (auto& [v, k] : t.coeffs) k /= g;
      t.constant /= g;
    }
  } else {
    auto& d = std::get<Divisibility>(a);
    if (d.modulus < 1) throw SemanticError("congruence modulus must be at least 1");
    d.residue = d.residue - d.term.constant;
    d.term.constant = 0;
    LinearTerm reduced;
    for (const auto& [v, k] : d.term.coeffs) {
      Int r = mod(k, d.modulus);
      if (r != 0) reduced.coeffs[v] = r;
    }
    d.term = reduced;
    d.residue = mod(d.residue, d.modulus);
    Int g = d.modulus;
    for (const auto& [v, k] : d.term.coeffs) g = gcd(g, k);
    if (!divides(g, d.residue)) return truth(false);
    if (d.term.is_constant()) return truth(true);
    for (auto& [v, k] : d.term.coeffs) k /= g;
    d.modulus /= g;
    d.residue /= g;
    if (d.modulus == 1) return truth(true);
  }
  return Formula(std::make_shared<Node>(Node{Kind::Atom, std::move(a), {}, {}}));
}

// ---------------------------------------------------------------------------
// Traversals

/// Applies fn to every atom (in syntactic order).
inline void for_each_atom(const Formula& f, const std::function<void(const Atom&)>& fn) {
  if (f.kind() == Formula::Kind::Atom) {
    fn(f.atom_value());
    return;
  }
  for (const auto& c : f.children()) for_each_atom(c, fn);
}

/// Rebuilds f with every atom replaced by fn(atom).
inline Formula map_atoms(const Formula& f, const std::function<Formula(const Atom&)>& fn) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False:
      return f;
    case K::Atom:
      return fn(f.atom_value());
    case K::Not:
      return Formula::negation(map_atoms(f.body(), fn));
    case K::Exists:
      return Formula::exists(f.bound_var(), map_atoms(f.body(), fn));
    case K::ForAll:
      return Formula::forall(f.bound_var(), map_atoms(f.body(), fn));
    default: {
      std::vector<Formula> cs;
      for (const auto& c : f.children()) cs.push_back(map_atoms(c, fn));
      return f.kind() == K::And ? Formula::conj(std::move(cs)) : Formula::disj(std::move(cs));
    }
  }
}

namespace detail {
inline void collect_free(const Formula& f, std::set<std::string>& bound, std::vector<std::string>& out,
                         std::set<std::string>& seen) {
  if (f.kind() == Formula::Kind::Atom) {
    for (const auto& [v, k] : atom_term(f.atom_value()).coeffs) {
      if (!bound.count(v) && seen.insert(v).second) out.push_back(v);
    }
    return;
  }
  if (f.is_quantifier()) {
    bool fresh = bound.insert(f.bound_var()).second;
    collect_free(f.body(), bound, out, seen);
    if (fresh) bound.erase(f.bound_var());
    return;
  }
  for (const auto& c : f.children()) collect_free(c, bound, out, seen);
}
}  // namespace detail

/// Free variables in order of first occurrence.
inline std::vector<std::string> free_vars_ordered(const Formula& f) {
  std::set<std::string> bound, seen;
  std::vector<std::string> out;
  detail::collect_free(f, bound, out, seen);
  return out;
}

inline std::set<std::string> free_vars(const Formula& f) {
  auto v = free_vars_ordered(f);
  return {v.begin(), v.end()};
}

inline bool is_quantifier_free(const Formula& f) {
  if (f.is_quantifier()) return false;
  for (const auto& c : f.children())
    if (!is_quantifier_free(c)) return false;
  return true;
}

namespace detail {
inline void collect_bound(const Formula& f, std::set<std::string>& out) {
  if (f.is_quantifier()) out.insert(f.bound_var());
  for (const auto& c : f.children()) collect_bound(c, out);
}
}  // namespace detail

/// Replaces free occurrences of v by t. Rejects substitution when v or a
/// variable of t is bound anywhere in f.
inline Formula substitute(const Formula& f, const std::string& v, const LinearTerm& t) {
  std::set<std::string> bound;
  detail::collect_bound(f, bound);
  if (bound.count(v)) throw SemanticError("cannot substitute bound variable '" + v + "'");
  for (const auto& [w, k] : t.coeffs)
    if (bound.count(w)) throw SemanticError("substitution would capture variable '" + w + "'");
  return map_atoms(f, [&](const Atom& a) -> Formula {
    if (const auto* c = std::get_if<Comparison>(&a)) return Formula::atom(Comparison{c->term.substitute(v, t), c->rel});
    const auto& d = std::get<Divisibility>(a);
    return Formula::atom(Divisibility{d.term.substitute(v, t), d.modulus, d.residue});
  });
}

/// Complement of an atom over the integers, as a positive formula.
inline Formula negate_atom(const Atom& a) {
  if (const auto* c = std::get_if<Comparison>(&a)) {
    if (c->rel == Rel::Le) return Formula::atom(Comparison{-c->term + LinearTerm::number(1), Rel::Le});
    return Formula::disj({Formula::atom(Comparison{c->term + LinearTerm::number(1), Rel::Le}),
                          Formula::atom(Comparison{-c->term + LinearTerm::number(1), Rel::Le})});
  }
  const auto& d = std::get<Divisibility>(a);
  std::vector<Formula> others;
  for (Int r = 0; r < d.modulus; ++r)
    if (r != d.residue) others.push_back(Formula::atom(Divisibility{d.term, d.modulus, r}));
  return Formula::disj(std::move(others));
}

/// Negation normal form: Not only disappears; atoms absorb negations.
inline Formula nnf(const Formula& f, bool negate = false) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False:
      return negate ? Formula::negation(f) : f;
    case K::Atom:
      return negate ? negate_atom(f.atom_value()) : f;
    case K::Not:
      return nnf(f.body(), !negate);
    case K::Exists:
    case K::ForAll: {
      Formula b = nnf(f.body(), negate);
      bool ex = (f.kind() == K::Exists) != negate;
      return ex ? Formula::exists(f.bound_var(), b) : Formula::forall(f.bound_var(), b);
    }
    case K::And:
    case K::Or: {
      std::vector<Formula> cs;
      for (const auto& c : f.children()) cs.push_back(nnf(c, negate));
      bool is_and = (f.kind() == K::And) != negate;
      return is_and ? Formula::conj(std::move(cs)) : Formula::disj(std::move(cs));
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Brute-force semantics

namespace detail {
inline bool eval(const Formula& f, std::map<std::string, Int>& env, const Int& bound) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
      return true;
    case K::False:
      return false;
    case K::Atom:
      return atom_holds(f.atom_value(), env);
    case K::Not:
      return !eval(f.body(), env, bound);
    case K::And:
      for (const auto& c : f.children())
        if (!eval(c, env, bound)) return false;
      return true;
    case K::Or:
      for (const auto& c : f.children())
        if (eval(c, env, bound)) return true;
      return false;
    case K::Exists:
    case K::ForAll: {
      const std::string& v = f.bound_var();
      auto saved = env.find(v) == env.end() ? std::optional<Int>{} : std::optional<Int>{env[v]};
      bool want = f.kind() == K::Exists;
      bool result = !want;
      for (Int x = 0; x <= bound; ++x) {
        env[v] = x;
        if (eval(f.body(), env, bound) == want) {
          result = want;
          break;
        }
      }
      if (saved) env[v] = *saved;
      else env.erase(v);
      return result;
    }
  }
  return false;
}
}  // namespace detail

/// Truth value with every quantifier ranging over {0, ..., quantifier_bound}.
inline bool eval_ground(const Formula& f, const std::map<std::string, Int>& assignment, const Int& quantifier_bound) {
  for (const auto& v : free_vars(f))
    if (!assignment.count(v)) throw SemanticError("no value assigned to free variable '" + v + "'");
  auto env = assignment;
  return detail::eval(f, env, quantifier_bound);
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline std::string term_side(const std::vector<std::pair<std::string, Int>>& vars, const Int& c) {
  std::string s;
  for (const auto& [v, k] : vars) {
    if (!s.empty()) s += " + ";
    s += k == 1 ? v : k.get_str() + "*" + v;
  }
  if (c != 0 || s.empty()) {
    if (!s.empty()) s += " + ";
    s += c.get_str();
  }
  return s;
}

inline std::string print_atom(const Atom& a) {
  if (const auto* c = std::get_if<Comparison>(&a)) {
    std::vector<std::pair<std::string, Int>> pos, neg;
    for (const auto& [v, k] : c->term.coeffs) (k > 0 ? pos : neg).emplace_back(v, k > 0 ? Int(k) : Int(-k));
    Int lc = c->term.constant > 0 ? Int(c->term.constant) : Int(0);
    Int rc = c->term.constant < 0 ? Int(-c->term.constant) : Int(0);
    std::string op = c->rel == Rel::Le ? " <= " : " = ";
    if (pos.empty() && !neg.empty()) {
      // constant <= vars  reads better as  vars >= constant
      return term_side(neg, rc) + (c->rel == Rel::Le ? " >= " : " = ") + term_side(pos, lc);
    }
    return term_side(pos, lc) + op + term_side(neg, rc);
  }
  const auto& d = std::get<Divisibility>(a);
  std::vector<std::pair<std::string, Int>> vars(d.term.coeffs.begin(), d.term.coeffs.end());
  std::string t = term_side(vars, 0);
  if (vars.size() > 1 || vars.front().second != 1) t = "(" + t + ")";
  return t + " % " + d.modulus.get_str() + " = " + d.residue.get_str();
}

// Binding strength: quantifier 0, or 1, and 2, not 3, atom 4.
inline int precedence(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Exists:
    case K::ForAll:
      return 0;
    case K::Or:
      return 1;
    case K::And:
      return 2;
    case K::Not:
      return 3;
    default:
      return 4;
  }
}

inline std::string print(const Formula& f);

inline std::string print_child(const Formula& f, int min_prec) {
  std::string s = print(f);
  return precedence(f) < min_prec ? "(" + s + ")" : s;
}

inline std::string print(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
      return "0 = 0";
    case K::False:
      return "0 = 1";
    case K::Atom:
      return print_atom(f.atom_value());
    case K::Not:
      return "!" + print_child(f.body(), 4);
    case K::Exists:
      return "E " + f.bound_var() + ". " + print(f.body());
    case K::ForAll:
      return "A " + f.bound_var() + ". " + print(f.body());
    case K::And:
    case K::Or: {
      std::string sep = f.kind() == K::And ? " & " : " | ";
      int p = f.kind() == K::And ? 3 : 2;
      std::string s;
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i) s += sep;
        s += print_child(f.children()[i], p);
      }
      return s;
    }
  }
  return {};
}

}  // namespace detail

inline std::string to_string(const Formula& f) { return detail::print(f); }

inline std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << to_string(f); }

// ---------------------------------------------------------------------------
// Parsing
//
//   formula  := quant | disj
//   quant    := ('E' | 'A') ident (','? ident)* '.' formula
//   disj     := conj ('|' conj)*
//   conj     := unary ('&' unary)*
//   unary    := '!' unary | '(' formula ')' | quant | atom
//   atom     := sum ('%' INT '=' sum | cmp sum)
//   sum      := ['-'] prod (('+' | '-') prod)*
//   prod     := INT ['*' (ident | '(' sum ')')] | ident | '(' sum ')'

namespace detail {

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse_all() {
    Formula f = formula();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("syntax error: " + msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(std::string_view s) {
    skip_ws();
    return text_.substr(pos_, s.size()) == s;
  }

  bool accept(std::string_view s) {
    if (!peek(s)) return false;
    pos_ += s.size();
    return true;
  }

  void expect(std::string_view s) {
    if (!accept(s)) fail("expected '" + std::string(s) + "'");
  }

  bool peek_ident() {
    skip_ws();
    return pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_');
  }

  std::string ident() {
    if (!peek_ident()) fail("expected identifier");
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  bool peek_int() {
    skip_ws();
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }

  Int integer() {
    if (!peek_int()) fail("expected integer literal");
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return Int(std::string(text_.substr(start, pos_ - start)));
  }

  bool peek_quantifier() {
    skip_ws();
    if (pos_ >= text_.size() || (text_[pos_] != 'E' && text_[pos_] != 'A')) return false;
    std::size_t next = pos_ + 1;
    return next >= text_.size() || !(std::isalnum(static_cast<unsigned char>(text_[next])) || text_[next] == '_');
  }

  Formula formula() {
    if (peek_quantifier()) return quantified();
    return disjunction();
  }

  Formula quantified() {
    skip_ws();
    bool exists = text_[pos_] == 'E';
    ++pos_;
    std::vector<std::pair<std::string, std::size_t>> vars;
    do {
      skip_ws();
      std::size_t at = pos_;
      std::string v = ident();
      if (v == "E" || v == "A") fail("reserved word used as variable");
      vars.emplace_back(v, at);
    } while (accept(",") || peek_ident());
    expect(".");
    for (const auto& [v, at] : vars) {
      if (bound_.count(v)) throw ParseError("variable '" + v + "' is quantified twice in nested scopes", at);
      bound_.insert(v);
    }
    Formula body = formula();
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      bound_.erase(it->first);
      body = exists ? Formula::exists(it->first, body) : Formula::forall(it->first, body);
    }
    return body;
  }

  Formula disjunction() {
    std::vector<Formula> parts{conjunction()};
    while (accept("|")) parts.push_back(conjunction());
    return Formula::disj(std::move(parts));
  }

  Formula conjunction() {
    std::vector<Formula> parts{unary()};
    while (accept("&")) parts.push_back(unary());
    return Formula::conj(std::move(parts));
  }

  Formula unary() {
    if (accept("!")) return Formula::negation(unary());
    if (peek_quantifier()) return quantified();
    if (peek("(")) {
      // Either a parenthesized formula or an atom whose left side starts with
      // a parenthesized sum.
      std::size_t save = pos_;
      try {
        return atom();
      } catch (const ParseError&) {
        pos_ = save;
      }
      expect("(");
      Formula f = formula();
      expect(")");
      return f;
    }
    return atom();
  }

  Formula atom() {
    LinearTerm lhs = sum();
    if (accept("%")) {
      Int m = integer();
      if (m < 1) fail("modulus must be at least 1");
      expect("=");
      LinearTerm rhs = sum();
      return Formula::congruent(lhs, rhs, m);
    }
    if (accept("<=")) return Formula::le(lhs, sum());
    if (accept(">=")) return Formula::ge(lhs, sum());
    if (accept("<")) return Formula::le(lhs + LinearTerm::number(1), sum());
    if (accept(">")) return Formula::ge(lhs, sum() + LinearTerm::number(1));
    if (accept("=")) return Formula::eq(lhs, sum());
    fail("expected comparison or '%'");
  }

  LinearTerm sum() {
    bool neg = accept("-");
    LinearTerm t = product();
    if (neg) t = -t;
    while (true) {
      if (accept("+")) t += product();
      else if (accept("-")) t = t - product();
      else break;
    }
    return t;
  }

  LinearTerm product() {
    if (peek_int()) {
      Int k = integer();
      if (accept("*")) {
        if (accept("(")) {
          LinearTerm inner = sum();
          expect(")");
          return inner * k;
        }
        return LinearTerm::variable(variable(), k);
      }
      return LinearTerm::number(k);
    }
    if (accept("(")) {
      LinearTerm inner = sum();
      expect(")");
      return inner;
    }
    return LinearTerm::variable(variable());
  }

  std::string variable() {
    if (peek_quantifier()) fail("reserved word used as variable");
    return ident();
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::set<std::string> bound_;
};

}  // namespace detail

inline Formula parse(std::string_view text) { return detail::Parser(text).parse_all(); }

/// Free variables of parse(text), ordered by first position in the text.
inline std::vector<std::string> free_vars_in_text_order(std::string_view text) {
  std::set<std::string> free = free_vars(parse(text)), seen;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text.size();) {
    if (std::isalpha(static_cast<unsigned char>(text[i])) || text[i] == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      std::string name(text.substr(i, j - i));
      if (free.count(name) && seen.insert(name).second) out.push_back(name);
      i = j;
    } else {
      ++i;
    }
  }
  return out;
}

}  // namespace presburger
