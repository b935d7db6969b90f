#include "oracles.hpp"
#include "presburger/formula.hpp"

#include <gtest/gtest.h>

using namespace presburger;

namespace {

bool holds(const Formula& f, std::map<std::string, Int> env, long B = 10) { return eval_ground(f, env, B); }

}  // namespace

TEST(Parse, OddNumbersAboveOne) {
  Formula f = parse("E b. b+b+1 = u & u > 1");
  ASSERT_EQ(f.kind(), Formula::Kind::Exists);
  EXPECT_EQ(f.bound_var(), "b");
  EXPECT_EQ(f.body().kind(), Formula::Kind::And);
  EXPECT_EQ(free_vars_ordered(f), std::vector<std::string>{"u"});
  EXPECT_TRUE(holds(f, {{"u", 3}}));
  EXPECT_FALSE(holds(f, {{"u", 2}}));
  for (int u = 0; u <= 40; ++u) EXPECT_EQ(holds(f, {{"u", u}}, 40), u > 1 && u % 2 == 1) << u;
}

TEST(Parse, CongruenceIsQuantifierFree) {
  Formula f = parse("u % 2 = 1 & u > 1");
  EXPECT_TRUE(is_quantifier_free(f));
  EXPECT_TRUE(holds(f, {{"u", 5}}));
  EXPECT_FALSE(holds(f, {{"u", 4}}));
}

TEST(Parse, TrivialAtom) {
  EXPECT_TRUE(parse("0 = 0").is_true());
  EXPECT_TRUE(parse("0 = 1").is_false());
}

TEST(Parse, Errors) {
  try {
    parse("x + <= 3");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
  EXPECT_THROW(parse("E x. E x. x = 1"), ParseError);
  EXPECT_THROW(parse("x % 0 = 1"), ParseError);
  EXPECT_THROW(parse("(x <= 1"), ParseError);
  EXPECT_THROW(parse("x <= 1 &"), ParseError);
  EXPECT_NO_THROW(parse("(E x. x = 1) & (E x. x = 2)"));
}

TEST(Parse, ParenthesizedSumsAndFormulas) {
  Formula f = parse("(x + 1) % 3 = 0 | (x <= 1 & !(x = 0))");
  for (int x = 0; x <= 10; ++x) EXPECT_EQ(holds(f, {{"x", x}}), (x + 1) % 3 == 0 || x == 1);
  Formula g = parse("2*(x - y) >= 3");
  EXPECT_TRUE(holds(g, {{"x", 5}, {"y", 3}}));
  EXPECT_FALSE(holds(g, {{"x", 4}, {"y", 3}}));
}

TEST(Parse, StrictComparisonsAreTightened) {
  EXPECT_EQ(parse("x < 3"), parse("x <= 2"));
  EXPECT_EQ(parse("x > 3"), parse("x >= 4"));
  EXPECT_EQ(parse("2*x <= 5"), parse("x <= 2"));
}

TEST(Eval, Examples) {
  EXPECT_TRUE(holds(parse("A x. x >= 0"), {}, 50));
  EXPECT_FALSE(holds(parse("E b. 2*b = u"), {{"u", 7}}, 100));
  EXPECT_THROW(eval_ground(parse("x = 1"), {}, 5), SemanticError);
}

TEST(Nnf, Examples) {
  EXPECT_EQ(nnf(parse("!(x <= 3)")), parse("x >= 4"));
  EXPECT_EQ(nnf(parse("!(x % 2 = 0)")), parse("x % 2 = 1"));
  Formula g = nnf(parse("!(x % 3 = 0)"));
  EXPECT_EQ(g, parse("x % 3 = 1 | x % 3 = 2"));
  for (int x = 0; x <= 20; ++x) EXPECT_EQ(holds(g, {{"x", x}}), x % 3 != 0);
}

TEST(Substitute, RejectsBoundVariables) {
  Formula f = parse("E b. b + u = 3");
  EXPECT_THROW(substitute(f, "b", LinearTerm::number(1)), SemanticError);
  EXPECT_THROW(substitute(f, "u", LinearTerm::variable("b")), SemanticError);
  Formula g = substitute(f, "u", LinearTerm::variable("v") + LinearTerm::number(1));
  EXPECT_TRUE(holds(g, {{"v", 2}}));
  EXPECT_FALSE(holds(g, {{"v", 3}}));
}

TEST(Properties, NnfPreservesSemantics) {
  oracle::FormulaGen gen(17);
  std::vector<std::string> vars{"x", "y"};
  for (int trial = 0; trial < 60; ++trial) {
    Formula f = gen.quantified(vars, gen.uniform(0, 2), gen.uniform(1, 4));
    Formula n = nnf(f);
    const long B = 6;
    oracle::for_each_point(2, B, [&](const IntVec& p) {
      auto env = oracle::assign(vars, p);
      EXPECT_EQ(eval_ground(n, env, B), eval_ground(f, env, B)) << to_string(f);
    });
  }
}

TEST(Properties, PrintParseRoundTrip) {
  oracle::FormulaGen gen(23);
  std::vector<std::string> vars{"x", "y", "z"};
  for (int trial = 0; trial < 200; ++trial) {
    Formula f = gen.quantified(vars, gen.uniform(0, 2), gen.uniform(1, 5));
    std::string text = to_string(f);
    Formula g = parse(text);
    EXPECT_EQ(g, f) << text << " => " << to_string(g);
    EXPECT_EQ(to_string(g), text);
  }
}

TEST(Print, Layout) {
  EXPECT_EQ(to_string(parse("u > 1 & u % 2 = 1")), "u >= 2 & u % 2 = 1");
  EXPECT_EQ(to_string(parse("x + 2*y <= z + 3")), "x + 2*y <= z + 3");
  EXPECT_EQ(to_string(parse("!(x = 1 | y = 2)")), "!(x = 1 | y = 2)");
  EXPECT_EQ(to_string(parse("E a, b. a + b = c")), "E a. E b. a + b = c");
}

TEST(FreeVars, TextOrder) {
  EXPECT_EQ(free_vars_in_text_order("x + y <= p + q"), (std::vector<std::string>{"x", "y", "p", "q"}));
  EXPECT_EQ(free_vars_in_text_order("E b. b + z = a & a2 % 2 = 1"), (std::vector<std::string>{"z", "a", "a2"}));
}
