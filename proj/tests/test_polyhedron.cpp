#include "oracles.hpp"
#include "presburger/polyhedron.hpp"

#include <gtest/gtest.h>

using namespace presburger;

namespace {

RatVec rv(std::initializer_list<Rat> xs) { return RatVec(xs); }

std::set<RatVec> as_set(const std::vector<RatVec>& v) { return {v.begin(), v.end()}; }
std::set<IntVec> as_set(const std::vector<IntVec>& v) { return {v.begin(), v.end()}; }

/// Integer points of cone(gens) at the origin, via rational solve per point.
bool in_cone(const std::vector<IntVec>& gens, const IntVec& x) {
  Polyhedron P(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) {
    IntVec e = zero_vec(gens.size());
    e[i] = 1;
    P.add_inequality(e, 0);
  }
  for (std::size_t r = 0; r < x.size(); ++r) {
    IntVec row;
    for (const auto& g : gens) row.push_back(g[r]);
    P.add_equality(row, x[r]);
  }
  return is_feasible(P);
}

}  // namespace

TEST(Feasibility, Examples) {
  Polyhedron P(1);
  P.add_inequality({1}, 1).add_inequality({-1}, 0);
  EXPECT_FALSE(is_feasible(P));
  Polyhedron Q = Polyhedron::orthant(2);
  Q.add_inequality({-1, -1}, -2);
  EXPECT_TRUE(is_feasible(Q));
  Polyhedron R = Polyhedron::orthant(2);
  R.add_equality({2, 2}, 1);
  EXPECT_TRUE(is_feasible(R));  // rational point (1/4, 1/4)
}

TEST(Projection, TriangleOntoFirstAxis) {
  Polyhedron Q = Polyhedron::orthant(2);
  Q.add_inequality({-1, -1}, -2);
  Polyhedron X = fm_project(Q, 1);
  ASSERT_EQ(X.dim(), 1u);
  for (int k = -4; k <= 8; ++k) {
    Rat x = make_rat(k, 2);
    EXPECT_EQ(X.contains(RatVec{x}), x >= 0 && x <= 2) << x;
  }
}

TEST(Feasibility, RandomAgainstGrid) {
  // Bounded polytopes in [0,3]^2 described with small integer rows; any
  // feasible one contains a point with denominator bounded by the product of
  // two row norms, so a fine rational grid decides feasibility.
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> c(-3, 3), b(-6, 6);
  for (int trial = 0; trial < 150; ++trial) {
    Polyhedron P = Polyhedron::orthant(2);
    P.add_inequality({-1, 0}, -3).add_inequality({0, -1}, -3);
    int m = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int i = 0; i < m; ++i) P.add_inequality({c(rng), c(rng)}, b(rng));
    if (trial % 5 == 0) P.add_equality({c(rng), c(rng)}, b(rng));
    bool grid = false;
    const int den = 36;
    for (int x = 0; x <= 3 * den && !grid; ++x)
      for (int y = 0; y <= 3 * den && !grid; ++y)
        grid = P.contains(RatVec{make_rat(x, den), make_rat(y, den)});
    EXPECT_EQ(is_feasible(P), grid);
  }
}

TEST(Vertices, ExampleTriangle) {
  Polyhedron P = Polyhedron::orthant(2);
  P.add_inequality({-2, -2}, -5);
  EXPECT_EQ(as_set(vertices(P)), as_set(std::vector<RatVec>{rv({0, 0}), rv({make_rat(5, 2), 0}), rv({0, make_rat(5, 2)})}));
}

TEST(Vertices, UnitBox) {
  Polyhedron P = Polyhedron::orthant(2);
  P.add_inequality({-1, 0}, -1).add_inequality({0, -1}, -1);
  EXPECT_EQ(vertices(P).size(), 4u);
}

TEST(Vertices, NonPointedRejected) {
  Polyhedron P(2);
  P.add_inequality({1, 0}, 0);
  EXPECT_THROW(vertices(P), SemanticError);
}

TEST(Vertices, RandomActiveConstraintRank) {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> c(-3, 3), b(-8, 2);
  for (int trial = 0; trial < 100; ++trial) {
    Polyhedron P = Polyhedron::orthant(3);
    for (int i = 0; i < 3; ++i) P.add_inequality({c(rng), c(rng), c(rng)}, b(rng));
    for (const auto& v : vertices(P)) {
      ASSERT_TRUE(P.contains(v));
      std::vector<IntVec> active;
      for (const auto& con : P.inequalities())
        if (dot(con.a, v) == Rat(con.b)) active.push_back(con.a);
      EXPECT_EQ(rank(active, 3), 3u);
      // moving off an active constraint leaves P
      for (const auto& con : P.inequalities()) {
        if (dot(con.a, v) != Rat(con.b)) continue;
        Polyhedron Q(3);
        for (const auto& other : P.inequalities()) Q.add_inequality(other.a, other.b);
        Q.add_inequality(con.a, con.b + 1);
        EXPECT_FALSE(Q.contains(v));
      }
    }
  }
}

TEST(RecessionCone, Strip) {
  Polyhedron P = Polyhedron::orthant(2);
  P.add_inequality({0, -1}, -1);
  EXPECT_EQ(as_set(recession_cone(P).generators), as_set(std::vector<IntVec>{{1, 0}}));
}

TEST(RecessionCone, BoundedHasNoRays) {
  Polyhedron P = Polyhedron::orthant(2);
  P.add_inequality({-1, -1}, -4);
  EXPECT_TRUE(recession_cone(P).generators.empty());
}

TEST(RecessionCone, Wedge) {
  Polyhedron P(2);
  P.add_inequality({-1, 1}, 0).add_inequality({1, 0}, 0);
  auto gens = recession_cone(P).generators;
  EXPECT_EQ(as_set(gens), as_set(std::vector<IntVec>{{0, 1}, {1, 1}}));
}

TEST(RecessionCone, RandomRaysKeepPointsInside) {
  std::mt19937 rng(13);
  std::uniform_int_distribution<int> c(-3, 3), b(-5, 3);
  for (int trial = 0; trial < 40; ++trial) {
    Polyhedron P = Polyhedron::orthant(3);
    for (int i = 0; i < 2; ++i) P.add_inequality({c(rng), c(rng), c(rng)}, b(rng));
    if (!is_feasible(P)) continue;
    auto cone = recession_cone(P);
    auto verts = vertices(P);
    // sample points: convex combinations of vertices plus ray multiples
    std::uniform_int_distribution<int> w(0, 4);
    for (int s = 0; s < 100; ++s) {
      RatVec p(3, Rat(0));
      Rat total = 0;
      std::vector<int> ws;
      for (std::size_t i = 0; i < verts.size(); ++i) ws.push_back(w(rng) + 1), total += ws.back();
      for (std::size_t i = 0; i < verts.size(); ++i)
        for (int k = 0; k < 3; ++k) p[k] += verts[i][k] * ws[i] / total;
      for (const auto& g : cone.generators) {
        Rat t = w(rng);
        for (int k = 0; k < 3; ++k) p[k] += t * g[k];
      }
      ASSERT_TRUE(P.contains(p));
      for (const auto& g : cone.generators)
        for (int t = 1; t <= 5; ++t) {
          RatVec q = p;
          for (int k = 0; k < 3; ++k) q[k] += Rat(t) * g[k];
          EXPECT_TRUE(P.contains(q));
        }
    }
  }
}

TEST(TangentCone, OrthantCorner) {
  Polyhedron P = Polyhedron::orthant(2);
  P.add_inequality({-2, -2}, -5);
  auto K = tangent_cone(P, rv({0, 0}));
  EXPECT_EQ(as_set(K.generators), as_set(std::vector<IntVec>{{1, 0}, {0, 1}}));
  EXPECT_THROW(tangent_cone(P, rv({1, 0})), SemanticError);
  auto K2 = tangent_cone(P, rv({make_rat(5, 2), 0}));
  EXPECT_EQ(as_set(K2.generators), as_set(std::vector<IntVec>{{-1, 0}, {-1, 1}}));
}

TEST(Triangulate, ThreeRaysInThePlane) {
  Cone C{rv({0, 0}), {{1, 0}, {1, 1}, {1, 2}}};
  auto pieces = triangulate(C);
  std::set<std::set<IntVec>> got;
  for (const auto& p : pieces) got.insert(as_set(p.generators));
  std::set<std::set<IntVec>> want{{IntVec{1, 0}, IntVec{1, 1}}, {IntVec{1, 1}, IntVec{1, 2}}};
  EXPECT_EQ(got, want);
}

TEST(Triangulate, SimplicialUnchanged) {
  Cone C{rv({0, 0}), {{1, 0}, {1, 2}}};
  auto pieces = triangulate(C);
  ASSERT_EQ(pieces.size(), 1u);
  EXPECT_EQ(pieces[0].generators, C.generators);
}

TEST(Triangulate, HalfOpenPiecesPartitionConeInBox) {
  // Cones over random point sets in the slice x0 = 1 (so all rays are
  // pointed); the half-open pieces must partition the integer points.
  std::mt19937 rng(21);
  std::uniform_int_distribution<int> c(-2, 2);
  for (int trial = 0; trial < 12; ++trial) {
    std::set<IntVec> uniq;
    for (int i = 0; i < 5; ++i) uniq.insert(primitive(IntVec{1, c(rng), c(rng)}));
    std::vector<IntVec> pts(uniq.begin(), uniq.end());
    if (rank(pts, 3) < 3) continue;
    // Extreme rays via the H-description of the cone.
    std::vector<IntVec> facets;
    {
      detail::for_each_subset(pts.size(), 2, [&](const std::vector<std::size_t>& s) {
        auto ker = nullspace({pts[s[0]], pts[s[1]]}, 3);
        if (ker.size() != 1) return;
        IntVec n = ker[0];
        bool pos = true, neg = true;
        for (const auto& p : pts) {
          if (dot(n, p) < 0) pos = false;
          if (dot(n, p) > 0) neg = false;
        }
        if (pos) facets.push_back(n);
        if (neg) facets.push_back(negate(n));
      });
    }
    auto gens = cone_generators(facets, {}, 3);
    Cone C{RatVec(3, Rat(0)), gens};
    auto pieces = triangulate(C);
    RatVec xi(3, Rat(0));
    for (const auto& g : gens)
      for (int k = 0; k < 3; ++k) xi[k] += g[k];
    std::vector<std::vector<bool>> open;
    for (const auto& p : pieces) open.push_back(open_facets(p.generators, xi));
    oracle::for_each_point(3, 6, [&](const IntVec& q0) {
      IntVec q{q0[0], q0[1] - 3, q0[2] - 3};
      int hits = 0;
      for (std::size_t i = 0; i < pieces.size(); ++i) {
        const auto& g = pieces[i].generators;
        std::vector<IntVec> cols;
        for (std::size_t r = 0; r < 3; ++r) cols.push_back({g[0][r], g[1][r], g[2][r]});
        auto lam = solve_rational(cols, to_rat(q), 3);
        bool inside = true;
        for (int k = 0; k < 3; ++k) {
          if ((*lam)[k] < 0) inside = false;
          if ((*lam)[k] == 0 && open[i][k]) inside = false;
        }
        hits += inside;
      }
      EXPECT_EQ(hits, in_cone(gens, q) ? 1 : 0) << to_string(q);
    });
  }
}
