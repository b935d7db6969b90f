// Acceptance checks. Prints one PASS/FAIL line per criterion; the exit code
// is the number of failed criteria. All comparisons are exact (tolerance 0).

#include "cli.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>

using namespace presburger;

namespace {

constexpr long kTolerance = 0;  // exact rational comparison everywhere

struct Check {
  bool ok = true;
  std::string why;
  void fail(const std::string& msg) {
    if (ok) why = msg;
    ok = false;
  }
  void expect(bool cond, const std::string& msg) {
    if (!cond) fail(msg);
  }
};

std::string cli_out(std::vector<std::string> args, Check& c) {
  std::istringstream in;
  std::ostringstream out, err;
  int code = cli::run(args, in, out, err);
  if (code != 0) c.fail("command exited " + std::to_string(code) + ": " + err.str());
  return out.str();
}

bool equal(const Rat& a, const Rat& b) { return abs(a - b) <= kTolerance; }

RationalGF uni(std::vector<std::pair<Rat, long>> numer, std::vector<long> den) {
  RationalGF f(1);
  std::vector<IntVec> d;
  for (long b : den) d.push_back({Int(b)});
  for (auto& [c, a] : numer) f.add_term({c, {Int(a)}, d});
  return f;
}

/// Truncated power series of sum c x^a / prod (1 - x^b), b > 0, a >= 0,
/// by repeated multiplication with geometric series.
std::vector<Rat> expand(const std::vector<std::pair<Rat, long>>& numer, const std::vector<long>& den, long N) {
  std::vector<Rat> s(static_cast<std::size_t>(N + 1), Rat(0));
  for (const auto& [c, a] : numer)
    if (a <= N) s[static_cast<std::size_t>(a)] += c;
  for (long b : den)
    for (long k = b; k <= N; ++k) s[static_cast<std::size_t>(k)] += s[static_cast<std::size_t>(k - b)];
  return s;
}

bool quasi_polys_equal(const UnivariateQP& u, const std::vector<std::vector<Rat>>& want) {
  if (u.threshold != 0 || u.period != static_cast<long>(want.size())) return false;
  for (std::size_t r = 0; r < want.size(); ++r)
    if (u.constituents[r].coefficients() != want[r]) return false;
  return true;
}

const std::vector<std::vector<Rat>> kTriangle = {{1, make_rat(3, 4), make_rat(1, 8)},
                                                  {make_rat(3, 8), make_rat(1, 2), make_rat(1, 8)}};

Rat triangle(long p) { return make_rat((p / 2 + 1) * (p / 2 + 2), 2); }

long count_synth(const SynthesizedFormula& s, long p) {
  long n = 0;
  std::vector<long> hi{s.tags - 1, s.max_multiplicity.get_si()};
  for (std::size_t j = 2; j < s.counted.size(); ++j) hi.push_back(p);
  std::vector<long> cur(hi.size(), 0);
  std::map<std::string, Int> env{{s.param, p}};
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == hi.size()) {
      for (std::size_t j = 0; j < cur.size(); ++j) env[s.counted[j]] = cur[j];
      n += eval_ground(s.formula, env, 0);
      return;
    }
    for (cur[i] = 0; cur[i] <= hi[i]; ++cur[i]) rec(i + 1);
  };
  rec(0);
  return n;
}

PiecewiseQuasiPolynomial poly_pqp(std::vector<Rat> coeffs) {
  PiecewiseQuasiPolynomial g{1, {}};
  g.pieces.push_back({Polyhedron::orthant(1), {1, Lattice(1), {{IntVec{Int(0)}, Polynomial::univariate(coeffs)}}}});
  return g;
}

// ---------------------------------------------------------------------------

Check qelim_fidelity() {
  Check c;
  Formula f = qelim(parse("E b. b+b+1 = u & u > 1"));
  c.expect(is_quantifier_free(f), "result has quantifiers");
  for (long u = 0; u <= 200; ++u) {
    bool want = u > 1 && u % 2 == 1;
    if (eval_ground(f, {{"u", u}}, 0) != want) c.fail("disagrees at u = " + std::to_string(u));
  }
  Formula g = parse(cli_out({"qelim", "E b. b+b+1 = u & u > 1"}, c));
  for (long u = 0; u <= 200; ++u)
    if (eval_ground(g, {{"u", u}}, 0) != (u > 1 && u % 2 == 1)) c.fail("cli output disagrees at u = " + std::to_string(u));
  return c;
}

Check genfun_odd_numbers() {
  Check c;
  RationalGF f = gf_from_json(cli_out({"--format", "json", "genfun", "u > 1 & u % 2 = 1"}, c));
  auto s = series_univariate(f, 200);
  for (long u = 0; u <= 200; ++u)
    if (!equal(s[static_cast<std::size_t>(u)], (u > 1 && u % 2 == 1) ? 1 : 0)) c.fail("coefficient " + std::to_string(u));
  return c;
}

Check cone_example() {
  Check c;
  Polyhedron K(2);
  K.add_inequality({2, -1}, 0).add_inequality({0, 1}, 0);  // cone{(1,0),(1,2)}
  RationalGF f = gf_of_cell(SemilinearCell{K, LatticeCoset::full(2)});
  RationalGF closed(f.vars());
  closed.add_term({1, {0, 0}, {{1, 0}, {1, 2}}});
  closed.add_term({1, {1, 1}, {{1, 0}, {1, 2}}});
  auto t = series_coeffs(f, 12), u = series_coeffs(closed, 12);
  oracle::for_each_point(2, 12, [&](const IntVec& p) {
    // brute force: p = a (1,0) + b (1,2), a, b >= 0 rational, p integral
    bool member = 2 * p[0] >= p[1];
    if (!equal(t.at(p), member ? 1 : 0)) c.fail("membership at " + to_string(p));
    if (!equal(t.at(p), u.at(p))) c.fail("closed form at " + to_string(p));
  });
  return c;
}

Check triangle_count() {
  Check c;
  std::vector<std::string> base{"--format", "json", "count", "2*c1 + 2*c2 <= p", "--count-vars", "c1,c2",
                                "--param-vars", "p", "--as"};
  auto qp_args = base, gf_args = base;
  qp_args.push_back("qp");
  gf_args.push_back("gf");
  auto g = pqp_from_json(cli_out(qp_args, c));
  c.expect(quasi_polys_equal(univariate_form(g.pqp), kTriangle), "constituents differ");
  auto s = series_univariate(gf_from_json(cli_out(gf_args, c)), 50);
  auto want = expand({{1, 0}}, {1, 2, 2}, 50);
  for (long p = 0; p <= 50; ++p)
    if (!equal(s[static_cast<std::size_t>(p)], want[static_cast<std::size_t>(p)])) c.fail("coefficient " + std::to_string(p));
  c.expect(std::vector<Rat>(want.begin(), want.begin() + 5) == std::vector<Rat>{1, 1, 3, 3, 6}, "oracle prefix");
  return c;
}

Check laurent_specialization() {
  Check c;
  RationalGF f = uni({{1, 0}, {-1, 1000}}, {1});
  std::vector<LaurentTrace> trace;
  RationalGF r = specialize_ones(f, {0}, &trace);
  c.expect(r.dim() == 0, "result is not a constant");
  if (r.dim() == 0) c.expect(equal(series_coeffs(r, 0).at(IntVec{}), 1000), "constant is not 1000");
  if (trace.size() != 2 || trace[0].coefficients.empty() || trace[1].coefficients.empty()) {
    c.fail("missing Laurent trace");
    return c;
  }
  auto lead = [](const RationalGF& g) { return g.terms().empty() ? Rat(0) : g.terms().at(0).coef; };
  Rat cm1 = lead(trace[0].coefficients[0]), dm1 = lead(trace[1].coefficients[0]);
  c.expect(cm1 != 0, "no pole in first term");
  c.expect(equal(cm1 + dm1, 0), "order -1 coefficients do not cancel");
  return c;
}

Check vector_partitions() {
  Check c;
  auto g = vpf_pqp({{1}, {2}, {2}});
  c.expect(quasi_polys_equal(univariate_form(g), kTriangle), "vpf(1,2,2) is not the triangle quasi-polynomial");
  std::vector<IntVec> a{{1, 0}, {0, 1}, {1, 1}};
  auto h = vpf_pqp(a);
  oracle::for_each_point(2, 12, [&](const IntVec& p) {
    if (!equal(pqp_eval(h, p), oracle::partitions(a, p))) c.fail("partition count at " + to_string(p));
  });
  return c;
}

Check round_trips() {
  Check c;
  std::mt19937 rng(31);
  auto pick = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  int corpus = 0;
  for (int i = 0; i < 24; ++i) {
    std::vector<long> den;
    for (long k = pick(1, 3); k > 0; --k) den.push_back(pick(1, 6));
    std::vector<std::pair<Rat, long>> numer;
    for (long k = pick(1, 3); k > 0; --k) numer.push_back({Rat(pick(-2, 3)), pick(0, 5)});
    RationalGF f = uni(numer, den);
    if (f.empty()) continue;
    ++corpus;
    auto want = expand(numer, den, 40);
    auto g = rgf_to_pqp(f);
    auto back = series_univariate(pqp_to_rgf(g), 40);
    for (long p = 0; p <= 40; ++p) {
      auto k = static_cast<std::size_t>(p);
      if (!equal(pqp_eval(g, {p}), want[k])) c.fail("rgf->pqp #" + std::to_string(i) + " at " + std::to_string(p));
      if (!equal(back[k], want[k])) c.fail("pqp->rgf #" + std::to_string(i) + " at " + std::to_string(p));
    }
  }
  c.expect(corpus >= 20, "corpus smaller than 20");
  auto s = series_univariate(pqp_to_rgf(poly_pqp({1, 1})), 40);
  auto want = expand({{1, 0}}, {1, 1}, 40);
  c.expect(s == want, "p + 1 is not 1/(1 - x)^2");
  return c;
}

Check synthesis() {
  Check c;
  std::vector<std::pair<std::string, PiecewiseQuasiPolynomial>> cases = {
      {"p^2", poly_pqp({0, 0, 1})},
      {"2p^2 - 3p + 1", poly_pqp({1, -3, 2})},
      {"5", poly_pqp({5})},
      {"triangle", rgf_to_pqp(uni({{1, 0}}, {1, 2, 2}))}};
  for (const auto& [name, g] : cases) {
    auto s = synth_formula(g, "p");
    for (long p = 0; p <= 30; ++p) {
      Rat want = name == "p^2" ? Rat(p * p) : name == "2p^2 - 3p + 1" ? Rat(2 * p * p - 3 * p + 1) : name == "5" ? Rat(5) : triangle(p);
      if (!equal(count_synth(s, p), want)) c.fail(name + " at p = " + std::to_string(p));
    }
  }
  return c;
}

Check semilinear_oracle() {
  Check c;
  oracle::FormulaGen gen(909);
  gen.max_mod = 4;
  int inequality_only = 0;
  for (int trial = 0; trial < 50; ++trial) {
    bool ineq = trial % 3 == 0;
    gen.allow_congruence = gen.allow_equality = !ineq;
    std::size_t d = static_cast<std::size_t>(gen.uniform(1, 3));
    std::vector<std::string> vars{"x", "y", "z"};
    vars.resize(d);
    Formula g = gen.quantifier_free(vars, gen.uniform(1, 6));
    SemilinearSet S = to_dnf(g, vars);
    oracle::for_each_point(d, 8, [&](const IntVec& p) {
      int hits = 0;
      for (const auto& cell : S.cells) hits += cell.contains(p);
      if (hits > 1) c.fail("overlapping cells at " + to_string(p) + " for " + to_string(g));
      if ((hits == 1) != eval_ground(g, oracle::assign(vars, p), 0)) c.fail("union differs at " + to_string(p) + " for " + to_string(g));
    });
    if (ineq) {
      ++inequality_only;
      std::set<LinearTerm> hyperplanes;
      for_each_atom(g, [&](const Atom& a) {
        LinearTerm t = atom_term(a);
        if (presburger::detail::first_coeff_negative(t)) t = -t + LinearTerm::number(1);
        hyperplanes.insert(t);
      });
      std::size_t full = 0;
      for (const auto& cell : S.cells) full += affine_dimension(cell.polyhedron) == static_cast<long>(d);
      if (Int(full) > arrangement_bound(d, hyperplanes.size())) c.fail("cell bound exceeded for " + to_string(g));
    }
  }
  c.expect(inequality_only > 0, "no inequality-only instance");
  return c;
}

Check hadamard_and_zero() {
  Check c;
  using Spec = std::pair<std::vector<std::pair<Rat, long>>, std::vector<long>>;
  std::vector<Spec> gfs = {{{{1, 0}}, {1}},          {{{1, 0}}, {1, 1}},         {{{1, 0}}, {1, 2, 2}},
                           {{{1, 3}}, {2}},          {{{1, 0}, {-1, 5}}, {1}},   {{{2, 1}}, {1, 3}},
                           {{{1, 0}, {1, 1}}, {3}},  {{{1, 2}}, {2, 2}},         {{{3, 0}}, {4}},
                           {{{1, 1}, {2, 4}}, {1, 5}}};
  for (int i = 0; i < 10; ++i) {
    const Spec& a = gfs[static_cast<std::size_t>(i)];
    const Spec& b = gfs[static_cast<std::size_t>((3 * i + 1) % 10)];
    auto h = series_univariate(hadamard_univariate(uni(a.first, a.second), uni(b.first, b.second)), 25);
    auto sa = expand(a.first, a.second, 25), sb = expand(b.first, b.second, 25);
    for (std::size_t k = 0; k <= 25; ++k)
      if (!equal(h[k], sa[k] * sb[k])) c.fail("pair " + std::to_string(i) + " at " + std::to_string(k));
  }
  // (gf, expected zero?)
  std::vector<std::pair<RationalGF, bool>> sums = {
      {uni({{1, 0}}, {1}) - uni({{1, 0}}, {1}), true},
      {uni({{1, 0}, {1, 1}}, {2}) - uni({{1, 0}}, {1}), true},
      {uni({{1, 0}}, {1}) - uni({{1, 1}}, {1}) - uni({{1, 0}}, {}), true},
      {uni({{1, 0}, {1, 1}, {1, 2}}, {3}) - uni({{1, 0}}, {1}), true},
      {uni({{1, 0}}, {1, 1}) - uni({{1, 0}}, {1}) - uni({{1, 1}}, {1, 1}), true},
      {uni({{1, 0}}, {1}) - uni({{1, 1000}}, {1}), false},
      {uni({{1, 0}}, {2}) - uni({{1, 0}}, {1}), false},
      {uni({{1, 0}}, {1, 1}) - uni({{1, 0}}, {1}), false},
      {uni({{1, 0}, {1, 1}}, {3}) - uni({{1, 0}}, {1}), false},
      {uni({{1, 7}}, {}), false}};
  for (std::size_t i = 0; i < sums.size(); ++i) {
    auto [f, zero] = sums[i];
    if (is_zero_univariate(f) != zero) c.fail("zero test on sum " + std::to_string(i));
  }
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Check (*run)();
  };
  const Criterion criteria[] = {
      {"quantifier elimination fidelity", qelim_fidelity},
      {"generating function of odd numbers above one", genfun_odd_numbers},
      {"cone generating function", cone_example},
      {"triangle counting function", triangle_count},
      {"Laurent specialization", laurent_specialization},
      {"vector partition functions", vector_partitions},
      {"generating function / quasi-polynomial round trips", round_trips},
      {"counting formula synthesis", synthesis},
      {"semilinear decomposition against ground evaluation", semilinear_oracle},
      {"Hadamard product and zero test", hadamard_and_zero},
  };
  int failed = 0, index = 0;
  for (const auto& cr : criteria) {
    ++index;
    auto start = std::chrono::steady_clock::now();
    Check c;
    try {
      c = cr.run();
    } catch (const std::exception& e) {
      c.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s (%.2fs)%s%s\n", c.ok ? "PASS" : "FAIL", index, cr.name, secs, c.ok ? "" : " - ",
                c.why.c_str());
    failed += !c.ok;
  }
  return failed;
}
