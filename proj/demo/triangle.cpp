// Counts lattice points in the dilated triangle {(c1, c2) : 2 c1 + 2 c2 <= p}
// and walks the result through every representation.

#include "presburger/presburger.hpp"

#include <iostream>

using namespace presburger;

int main() {
  Formula f = parse("2*c1 + 2*c2 <= p");
  SemilinearSet S = semilinear_from_formula(f, {"c1", "c2", "p"});
  std::cout << "cells:\n" << to_text(S) << "\n";

  RationalGF G = gf_of_semilinear(S);
  std::cout << "generating function of the set:\n  " << to_text(G) << "\n";

  RationalGF g = specialize_ones(G, {0, 1});
  std::cout << "counting function:\n  " << to_text(g) << "\n";

  PiecewiseQuasiPolynomial q = rgf_to_pqp(g);
  std::cout << "quasi-polynomial:\n" << to_text(q, g.vars()) << "\n";

  std::cout << "p  count\n";
  auto series = series_univariate(g, 10);
  for (long p = 0; p <= 10; ++p) std::cout << p << "  " << series[p] << "  " << pqp_eval(q, IntVec{p}) << "\n";

  SynthesizedFormula s = synth_formula(q, "p");
  std::cout << "\na formula with the same counting function:\n  " << to_string(s.formula) << "\n";
}
