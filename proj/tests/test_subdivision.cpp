#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "generators.hpp"
#include "ssr/subdivision.hpp"

using namespace ssr;
using namespace fixtures;

namespace {

std::size_t maximal_count(const Complex& c) { return c.maximal_cones().size(); }

void expect_projective(const Subdivision& s) {
  auto report = verify_projectivity(s.result, s.base, s.certificate);
  EXPECT_TRUE(report.ok()) << (report.ok() ? "" : report.issues.front());
}

}  // namespace

TEST(Star, UnimodularPiecesForTwoDimensionalCone) {
  auto f = e3();
  auto s = star_subdivide(f.source(), qv({1, 1}));
  EXPECT_EQ(maximal_count(s.result), 2u);
  for (auto m : s.result.maximal_cones()) EXPECT_EQ(multiplicity(s.result, m), 1);
  expect_projective(s);
}

TEST(Star, InteriorPointOfFourCone) {
  auto f = e1();
  auto s = star_subdivide(f.source(), qv({1, 1, 1, 1}));
  EXPECT_EQ(maximal_count(s.result), 4u);
  for (auto m : s.result.maximal_cones()) EXPECT_EQ(multiplicity(s.result, m), 1);
  expect_projective(s);
}

TEST(Star, AtRayIsIdentity) {
  Complex quad = positive_orthant(2);
  auto s = star_subdivide(quad, qv({3, 0}));
  EXPECT_EQ(s.result, quad);
}

TEST(Star, RejectsPointsOutsideOrOffLattice) {
  Complex quad = positive_orthant(2);
  EXPECT_THROW(star_subdivide(quad, qv({-1, 1})), InvalidInput);
  Complex c = single_cone(2, {qv({1, 0}), qv({1, 2})});
  ComplexBuilder b(2);
  b.add_cone({qv({1, 0}), qv({0, 1})}, LatticeBasis::from_generators(2, {qv({2, 0}), qv({0, 1})}));
  Complex coarse = b.build();
  EXPECT_THROW(star_subdivide(coarse, qv({1, 1})), InvalidInput);
}

TEST(Star, OnSharedFaceSplitsBothNeighbours) {
  Complex c = complex_of(2, {qv({1, 0}), qv({0, 1}), qv({-1, 0})}, {{0, 1}, {1, 2}});
  auto s = star_subdivide(c, qv({0, 1}));
  EXPECT_EQ(s.result, c);
  Complex d = complex_of(3, {qv({1, 0, 0}), qv({0, 1, 0}), qv({0, 0, 1}), qv({1, 1, -1})}, {{0, 1, 2}, {0, 1, 3}});
  auto t = star_subdivide(d, qv({1, 1, 0}));
  EXPECT_EQ(maximal_count(t.result), 4u);
  expect_projective(t);
}

TEST(Certificate, ZeroFunctionIsRejected) {
  auto s = star_subdivide(e1().source(), qv({1, 1, 1, 1}));
  GoodFunction zero{std::vector<Rational>(s.result.rays().size(), Rational(0))};
  EXPECT_FALSE(verify_projectivity(s.result, s.base, zero).ok());
  GoodFunction bump = s.certificate;
  for (auto& v : bump.values) v = -v;
  EXPECT_FALSE(verify_projectivity(s.result, s.base, bump).ok());
}

TEST(Certificate, MissingCellIsReported) {
  Complex c = complex_of(2, {qv({1, 0}), qv({1, 1}), qv({0, 1})}, {{0, 1}});
  Complex quad = positive_orthant(2);
  EXPECT_FALSE(check_refinement(c, quad).ok());
}

TEST(Barycentric, CellCounts) {
  auto three = barycentric_subdivide(positive_orthant(3), default_order(positive_orthant(3)));
  EXPECT_EQ(maximal_count(three.result), 6u);
  expect_projective(three);
  auto two = barycentric_subdivide(positive_orthant(2), default_order(positive_orthant(2)));
  EXPECT_EQ(maximal_count(two.result), 2u);
  expect_projective(two);
}

TEST(Barycentric, RejectsOrderAgainstFaces) {
  Complex quad = positive_orthant(2);
  auto order = default_order(quad);
  std::reverse(order.begin(), order.end());
  EXPECT_FALSE(refines_face_order(quad, order));
  EXPECT_THROW(barycentric_subdivide(quad, order), InvalidInput);
}

TEST(Mbs, SingleMarkedPointMatchesStar) {
  auto f = e1();
  const Complex& c = f.source();
  MBSData data;
  data.order = default_order(c);
  data.points[c.maximal_cones()[0]] = qv({1, 1, 1, 1});
  auto m = mbs_subdivide(c, data);
  EXPECT_EQ(m.result, star_subdivide(c, qv({1, 1, 1, 1})).result);
  expect_projective(m);
}

TEST(Pulling, SquareConeSplitsInTwo) {
  Complex sq = single_cone(3, {qv({1, 0, 1}), qv({0, 1, 1}), qv({-1, 0, 1}), qv({0, -1, 1})});
  auto s = triangulate_pulling(sq, {0, 1, 2, 3});
  EXPECT_EQ(maximal_count(s.result), 2u);
  EXPECT_TRUE(s.result.simplicial());
  expect_projective(s);
}

TEST(Cut, HalfPlaneSplitsQuadrant) {
  Complex quad = positive_orthant(2);
  auto s = cut_by_hyperplanes(quad, {qv({1, -1})});
  EXPECT_EQ(maximal_count(s.result), 2u);
  EXPECT_TRUE(s.result.find_ray(qv({1, 1})).has_value());
  expect_projective(s);
  auto none = cut_by_hyperplanes(quad, {qv({1, 1})});
  EXPECT_EQ(none.result, quad);
}

TEST(Pullback, AgainstBarycentricTarget) {
  auto f = e1();
  auto bs = barycentric_subdivide(f.target(), default_order(f.target()));
  auto p = pullback_refine(f, bs);
  EXPECT_EQ(maximal_count(p.result), 2u);
  expect_projective(p);
  ComplexMorphism g(p.result, bs.result, f.map());
  for (std::size_t i = 0; i < g.source().cone_count(); ++i) EXPECT_TRUE(g.target_carrier(i).has_value());
}

TEST(Induced, BarycentricMarkingOnE3) {
  auto f = e3();
  MBSData data;
  data.order = default_order(f.source());
  data.points[f.source().maximal_cones()[0]] = qv({1, 1});
  auto induced = induce_simplicial_map(f, data);
  EXPECT_EQ(maximal_count(induced.source.result), 2u);
  EXPECT_EQ(maximal_count(induced.target.result), 1u);
}

TEST(Induced, HypothesisViolationHasWitness) {
  // With only the rays marked, the last marked face of the quadrant is a ray.
  Complex c = positive_orthant(2);
  ComplexMorphism f = identity_on(c);
  MBSData data;
  auto order = default_order(c);
  data.order = order;
  EXPECT_THROW(
      {
        try {
          induce_simplicial_map(f, data);
        } catch (const HypothesisViolation& e) {
          EXPECT_EQ(e.witness(), c.maximal_cones()[0]);
          throw;
        }
      },
      HypothesisViolation);
}

// Property: repeated stars at random lattice points stay projective and
// preserve the support.
TEST(Property, RandomStarSequencesStayProjective) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = gen::uniform(rng, 2, 3);
    Complex base = gen::cone_complex(gen::random_simplicial_generators(rng, n, -3, 3));
    Subdivision s = trivial_subdivision(base);
    int steps = gen::uniform(rng, 1, 4);
    for (int k = 0; k < steps; ++k) {
      const auto& cones = s.result.maximal_cones();
      std::size_t pick = cones[gen::uniform(rng, 0, static_cast<int>(cones.size()) - 1)];
      auto faces = s.result.faces_of(pick);
      std::size_t face = faces[gen::uniform(rng, 0, static_cast<int>(faces.size()) - 1)];
      s = star_subdivide(s, gen::interior_lattice_point(rng, s.result, face));
    }
    expect_projective(s);
  }
}

// Property: barycentric subdivision of a simplicial d-cone has d! cells of
// the same dimension.
TEST(Property, BarycentricHasFactorialCells) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = gen::uniform(rng, 2, 4);
    Complex base = gen::cone_complex(gen::random_simplicial_generators(rng, n, -2, 2));
    auto bs = barycentric_subdivide(base, default_order(base));
    std::size_t fact = 1;
    for (std::size_t i = 2; i <= n; ++i) fact *= i;
    EXPECT_EQ(maximal_count(bs.result), fact);
    expect_projective(bs);
  }
}

// Property: marked subdivisions with random interior points agree with the
// chain description (checked inside) and are projective.
TEST(Property, RandomMarkedSubdivisions) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = gen::uniform(rng, 2, 3);
    Complex base = gen::cone_complex(gen::random_simplicial_generators(rng, n, -2, 2));
    MBSData data;
    data.order = default_order(base);
    for (std::size_t i = 0; i < base.cone_count(); ++i)
      if (base.cone(i).dim > 1 && gen::uniform(rng, 0, 1)) data.points[i] = gen::interior_lattice_point(rng, base, i);
    auto m = mbs_subdivide(base, data);
    expect_projective(m);
  }
}

// Property: cutting by random hyperplanes refines and keeps convexity.
TEST(Property, RandomCuts) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Complex base = gen::cone_complex(gen::random_simplicial_generators(rng, 3, -2, 2));
    std::vector<QVector> normals;
    for (int k = 0; k < 2; ++k) {
      QVector v(3);
      for (auto& x : v) x = gen::uniform(rng, -2, 2);
      if (!is_zero(v)) normals.push_back(v);
    }
    auto s = cut_by_hyperplanes(base, normals);
    expect_projective(s);
  }
}

// Property: the cell-tracking star sequence builds the same complex as one
// star at a time, and its certificate is accepted.
TEST(Property, StarSequenceMatchesRepeatedStars) {
  std::mt19937 rng(17);
  Complex fan = complex_of(3, {qv({1, 0, 0}), qv({0, 1, 0}), qv({0, 0, 1}), qv({1, 1, 1}), qv({-1, 0, 0})},
                           {{0, 1, 3}, {1, 2, 3}, {0, 2, 3}, {1, 2, 4}});
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = gen::uniform(rng, 2, 4);
    Complex base = trial % 3 == 0 ? fan : gen::cone_complex(gen::random_simplicial_generators(rng, n, -3, 3));
    std::vector<QVector> points;
    int count = gen::uniform(rng, 1, 6);
    for (int k = 0; k < count; ++k) {
      std::size_t face = gen::uniform(rng, 0, static_cast<int>(base.cone_count()) - 1);
      QVector p = gen::interior_lattice_point(rng, base, face);
      if (std::find(points.begin(), points.end(), p) == points.end()) points.push_back(p);
    }
    Complex expected = base;
    std::vector<QVector> starred;
    for (const auto& p : points) {
      auto carrier = expected.carrier(p);
      ASSERT_TRUE(carrier.has_value());
      if (expected.cone(*carrier).dim == 1) continue;
      expected = star_subdivide(expected, p).result;
      starred.push_back(p);
    }
    auto seq = star_sequence(base, points);
    EXPECT_EQ(seq.subdivision.result, expected);
    EXPECT_EQ(seq.starred, starred);
    expect_projective(seq.subdivision);
  }
}
