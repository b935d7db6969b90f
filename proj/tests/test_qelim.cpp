#include "oracles.hpp"
#include "presburger/qelim.hpp"

#include <gtest/gtest.h>

using namespace presburger;

namespace {

bool holds(const Formula& f, std::map<std::string, Int> env, long B) { return eval_ground(f, env, B); }

/// Random formula whose quantifiers are guarded (E q. q <= g & ..., A q. q > g | ...)
/// by a guard g that is a constant <= 6 or a free variable plus a constant
/// <= 3. With free variables in [0,B], quantifier bound B + 6 is exact.
Formula guarded(oracle::FormulaGen& gen, const std::vector<std::string>& free, int quantifiers, int atoms) {
  std::vector<std::string> all = free;
  for (int i = 0; i < quantifiers; ++i) all.push_back("q" + std::to_string(i));
  Formula f = gen.quantifier_free(all, atoms);
  for (int i = quantifiers - 1; i >= 0; --i) {
    std::string q = "q" + std::to_string(i);
    LinearTerm guard = LinearTerm::number(gen.uniform(0, 6));
    if (!free.empty() && gen.uniform(0, 1)) {
      guard = LinearTerm::variable(free[gen.uniform(0, static_cast<int>(free.size()) - 1)]) +
              LinearTerm::number(gen.uniform(0, 3));
    }
    Formula bound = Formula::le(LinearTerm::variable(q), guard);
    if (gen.uniform(0, 2)) f = Formula::exists(q, Formula::conj({bound, f}));
    else f = Formula::forall(q, Formula::disj({Formula::negation(bound), f}));
  }
  return f;
}

}  // namespace

TEST(Eliminate, OddNumbersAboveOne) {
  Formula f = parse("E b. b+b+1 = u & u > 1");
  Formula g = eliminate_innermost(f);
  EXPECT_TRUE(is_quantifier_free(g));
  Formula want = parse("u > 1 & u % 2 = 1");
  for (int u = 0; u <= 100; ++u) EXPECT_EQ(holds(g, {{"u", u}}, 0), holds(want, {{"u", u}}, 0)) << u;
}

TEST(Eliminate, WitnessIsTheVariable) {
  Formula g = eliminate_innermost(parse("E b. b = u"));
  EXPECT_TRUE(g.is_true()) << to_string(g);
}

TEST(Eliminate, MultiplesOfThree) {
  Formula g = eliminate_innermost(parse("E b. 3*b = u & u <= 10"));
  Formula want = parse("u % 3 = 0 & u <= 10");
  for (int u = 0; u <= 30; ++u) EXPECT_EQ(holds(g, {{"u", u}}, 0), holds(want, {{"u", u}}, 0)) << u;
}

TEST(Eliminate, OnlyInnermostIsRemoved) {
  Formula f = parse("E a. (a <= u & E b. 2*b + a = u)");
  Formula g = eliminate_innermost(f);
  ASSERT_EQ(g.kind(), Formula::Kind::Exists);
  EXPECT_EQ(g.bound_var(), "a");
  EXPECT_TRUE(is_quantifier_free(g.body()));
  for (int u = 0; u <= 20; ++u) EXPECT_EQ(holds(g, {{"u", u}}, 40), holds(f, {{"u", u}}, 40));
}

TEST(Qelim, QuantifierFreeUnchanged) {
  Formula f = parse("x + y <= 3 | x % 2 = 1");
  EXPECT_EQ(qelim(f), f);
}

TEST(Qelim, Tautology) { EXPECT_TRUE(qelim(parse("A b. b >= u | b <= u")).is_true()); }

TEST(Qelim, OddNumbersAboveOne) {
  Formula g = qelim(parse("E b. b+b+1 = u & u > 1"));
  EXPECT_TRUE(is_quantifier_free(g));
  for (int u = 0; u <= 100; ++u) EXPECT_EQ(holds(g, {{"u", u}}, 0), u > 1 && u % 2 == 1);
}

TEST(Decide, Examples) {
  EXPECT_FALSE(decide(parse("E a. E b. 2*a + 3*b = 1")));
  EXPECT_TRUE(decide(parse("E a. E b. 2*a + 3*b = 7")));
  EXPECT_TRUE(decide(parse("A u. E v. v = u + 1")));
  EXPECT_FALSE(decide(parse("E u. u > 1 & u % 2 = 1 & u <= 2")));
  EXPECT_FALSE(decide(parse("E u. u < 0")));
  EXPECT_FALSE(decide(parse("A u. E v. u = 2*v")));
  EXPECT_TRUE(decide(parse("A u. E v. u = 2*v | u = 2*v + 1")));
}

TEST(Decide, FreeVariablesRejected) { EXPECT_THROW(decide(parse("E a. a = u")), SemanticError); }

TEST(Decide, FrobeniusNumbers) {
  // largest non-representable value of 3a + 5b is 7
  EXPECT_FALSE(decide(parse("E a, b. 3*a + 5*b = 7")));
  EXPECT_TRUE(decide(parse("A n. n < 8 | E a, b. 3*a + 5*b = n")));
}

TEST(Properties, QelimEquivalentOnGuardedCorpus) {
  oracle::FormulaGen gen(101);
  gen.max_coef = 5;
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    int nfree = gen.uniform(1, 3);
    int nq = gen.uniform(1, nfree == 3 ? 2 : 3);
    std::vector<std::string> free;
    for (int i = 0; i < nfree; ++i) free.push_back(std::string(1, static_cast<char>('x' + i)));
    Formula f = guarded(gen, free, nq, gen.uniform(1, 3));
    Formula g = qelim(f);
    ASSERT_TRUE(is_quantifier_free(g));
    const long B = nfree == 3 ? 4 : 6;
    oracle::for_each_point(free.size(), B, [&](const IntVec& p) {
      auto env = oracle::assign(free, p);
      EXPECT_EQ(eval_ground(g, env, 0), eval_ground(f, env, B + 6)) << to_string(f) << " at " << to_string(p);
    });
    ++checked;
  }
  EXPECT_EQ(checked, 120);
}

TEST(Properties, DecideMatchesGroundEvaluation) {
  oracle::FormulaGen gen(202);
  for (int trial = 0; trial < 80; ++trial) {
    Formula f = guarded(gen, {}, gen.uniform(1, 3), gen.uniform(1, 3));
    Formula g = qelim(f);
    ASSERT_TRUE(g.is_true() || g.is_false()) << to_string(g);
    EXPECT_EQ(decide(f), g.is_true());
    EXPECT_EQ(decide(f), eval_ground(f, {}, 6)) << to_string(f);
  }
}

TEST(Properties, FormulaLevelEliminationEquivalent) {
  // exercises the elimination path used when the DNF is large
  oracle::FormulaGen gen(303);
  gen.max_coef = 4;
  std::vector<std::string> free{"x", "y"};
  for (int trial = 0; trial < 60; ++trial) {
    Formula body = Formula::conj({Formula::le(LinearTerm::variable("q"), LinearTerm::variable("x") + LinearTerm::number(2)),
                                  gen.quantifier_free({"x", "y", "q"}, gen.uniform(2, 5))});
    Formula g = detail::exists_nnf("q", nnf(body));
    ASSERT_TRUE(is_quantifier_free(g));
    Formula f = Formula::exists("q", body);
    oracle::for_each_point(2, 6, [&](const IntVec& p) {
      auto env = oracle::assign(free, p);
      EXPECT_EQ(eval_ground(g, env, 0), eval_ground(f, env, 8)) << to_string(f);
    });
  }
}

TEST(Qelim, BoundTightening) {
  EXPECT_EQ(to_string(qelim(parse("E b. b+b+1 = u & u > 1"))), "u >= 2 & u % 2 = 1");
  EXPECT_EQ(to_string(qelim(parse("E b. b = u & u >= 3 & u >= 5 & u <= 9 & u <= 7"))), to_string(parse("u >= 5 & u <= 7")));
}
