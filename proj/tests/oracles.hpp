#pragma once

// Brute-force reference implementations used as test oracles.

#include "presburger/formula.hpp"

#include <functional>
#include <random>

namespace oracle {

using presburger::Formula;
using presburger::Int;
using presburger::IntVec;
using presburger::LinearTerm;

/// Calls fn on every point of [0,B]^d in lexicographic order.
inline void for_each_point(std::size_t d, long B, const std::function<void(const IntVec&)>& fn) {
  IntVec p(d, Int(0));
  while (true) {
    fn(p);
    std::size_t i = d;
    while (i > 0) {
      --i;
      if (p[i] < B) {
        ++p[i];
        for (std::size_t j = i + 1; j < d; ++j) p[j] = 0;
        break;
      }
      if (i == 0) return;
    }
    if (d == 0) return;
  }
}

inline std::map<std::string, Int> assign(const std::vector<std::string>& vars, const IntVec& p) {
  std::map<std::string, Int> env;
  for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = p[i];
  return env;
}

struct FormulaGen {
  std::mt19937 rng;
  int max_coef = 3;
  int max_const = 6;
  int max_mod = 4;
  bool allow_congruence = true;
  bool allow_equality = true;

  explicit FormulaGen(unsigned seed) : rng(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

  LinearTerm term(const std::vector<std::string>& vars) {
    LinearTerm t;
    while (t.is_constant()) {
      t = LinearTerm::number(uniform(-max_const, max_const));
      for (const auto& v : vars)
        if (uniform(0, 2) > 0) t += LinearTerm::variable(v, uniform(-max_coef, max_coef));
    }
    return t;
  }

  Formula atom(const std::vector<std::string>& vars) {
    int kind = uniform(0, 9);
    LinearTerm t = term(vars);
    if (allow_congruence && kind < 2) {
      int m = uniform(2, max_mod);
      return Formula::congruent(t, LinearTerm::number(uniform(0, m - 1)), m);
    }
    if (allow_equality && kind < 4) return Formula::eq(t, LinearTerm());
    return Formula::le(t, LinearTerm());
  }

  /// Random boolean combination of `atoms` atoms over vars.
  Formula quantifier_free(const std::vector<std::string>& vars, int atoms) {
    std::vector<Formula> parts;
    for (int i = 0; i < atoms; ++i) {
      Formula a = atom(vars);
      if (uniform(0, 4) == 0) a = Formula::negation(a);
      parts.push_back(a);
    }
    while (parts.size() > 1) {
      std::size_t i = uniform(0, static_cast<int>(parts.size()) - 2);
      Formula merged = uniform(0, 1) ? Formula::conj({parts[i], parts[i + 1]}) : Formula::disj({parts[i], parts[i + 1]});
      if (uniform(0, 6) == 0) merged = Formula::negation(merged);
      parts[i] = merged;
      parts.erase(parts.begin() + static_cast<long>(i) + 1);
    }
    return parts.front();
  }

  /// Quantified formula: `quantifiers` bound variables q0.., free vars `free`.
  Formula quantified(const std::vector<std::string>& free, int quantifiers, int atoms) {
    std::vector<std::string> all = free;
    for (int i = 0; i < quantifiers; ++i) all.push_back("q" + std::to_string(i));
    Formula f = quantifier_free(all, atoms);
    for (int i = quantifiers - 1; i >= 0; --i) {
      std::string v = "q" + std::to_string(i);
      f = uniform(0, 2) ? Formula::exists(v, f) : Formula::forall(v, f);
    }
    return f;
  }
};

/// Number of solutions c in [0,B]^k of a formula in (c, p) with p fixed.
inline long count_solutions(const Formula& f, const std::vector<std::string>& counted, const std::string& param,
                            long p, long B, long qbound = 0) {
  long n = 0;
  for_each_point(counted.size(), B, [&](const IntVec& c) {
    auto env = assign(counted, c);
    env[param] = p;
    if (presburger::eval_ground(f, env, qbound)) ++n;
  });
  return n;
}

/// Number of ways to write p as a nonnegative combination of the vectors a.
inline long partitions(const std::vector<IntVec>& a, const IntVec& p) {
  std::function<long(std::size_t, IntVec)> rec = [&](std::size_t i, IntVec rest) -> long {
    for (const auto& x : rest)
      if (x < 0) return 0;
    if (i == a.size()) return presburger::is_zero(rest) ? 1 : 0;
    long total = 0;
    while (true) {
      bool ok = true;
      for (const auto& x : rest)
        if (x < 0) ok = false;
      if (!ok) break;
      total += rec(i + 1, rest);
      if (presburger::is_zero(a[i])) break;
      rest = presburger::sub(rest, a[i]);
    }
    return total;
  };
  return rec(0, p);
}

}  // namespace oracle
