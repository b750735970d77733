#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace ssr;
using namespace fixtures;

TEST(Multiplicity, Examples) {
  Complex quad = positive_orthant(2);
  EXPECT_EQ(multiplicity(quad, quad.maximal_cones()[0]), 1);
  Complex c = single_cone(2, {qv({1, 0}), qv({1, 2})});
  EXPECT_EQ(multiplicity(c, c.maximal_cones()[0]), 2);
  auto f = e1();
  EXPECT_EQ(multiplicity(f.source(), f.source().maximal_cones()[0]), 2);
}

TEST(Multiplicity, RejectsNonSimplicial) {
  Complex sq = single_cone(3, {qv({1, 0, 1}), qv({0, 1, 1}), qv({-1, 0, 1}), qv({0, -1, 1})});
  EXPECT_THROW(multiplicity(sq, sq.maximal_cones()[0]), std::invalid_argument);
  EXPECT_THROW(waterman_points(sq, sq.maximal_cones()[0]), std::invalid_argument);
}

TEST(Waterman, Examples) {
  Complex quad = positive_orthant(2);
  auto w0 = waterman_points(quad, quad.maximal_cones()[0]);
  ASSERT_EQ(w0.size(), 1u);
  EXPECT_TRUE(is_zero(w0[0].point));

  Complex c = single_cone(2, {qv({1, 0}), qv({1, 2})});
  auto w1 = waterman_points(c, c.maximal_cones()[0]);
  ASSERT_EQ(w1.size(), 2u);
  EXPECT_TRUE(is_zero(w1[0].point));
  EXPECT_EQ(w1[1].point, qv({1, 1}));
  EXPECT_EQ(w1[1].coefficients, (QVector{Rational(1, 2), Rational(1, 2)}));

  auto f = e1();
  auto w2 = waterman_points(f.source(), f.source().maximal_cones()[0]);
  ASSERT_EQ(w2.size(), 2u);
  EXPECT_EQ(w2[1].point, qv({1, 1, 1, 1}));
  for (const auto& a : w2[1].coefficients) EXPECT_EQ(a, Rational(1, 2));
}

TEST(Waterman, ReflectionCaseFixture) {
  auto f = reflection_case();
  auto w = waterman_points(f.source(), f.source().maximal_cones()[0]);
  ASSERT_EQ(w.size(), 3u);
  std::vector<QVector> pts;
  for (const auto& p : w) pts.push_back(p.point);
  std::vector<QVector> expected{qv({0, 0, 0, 0, 0}), qv({1, 1, 1, 1, 1}), qv({2, 1, 2, 2, 2})};
  std::sort(pts.begin(), pts.end());
  EXPECT_EQ(pts, expected);
}

// Cardinality, class representatives and the brute-force count agree.
TEST(Waterman, MatchesBruteForceOnRandomCones) {
  std::mt19937 rng(21);
  int checked = 0;
  while (checked < 150) {
    auto gens = gen::random_simplicial_generators(rng, 1 + checked % 4, 0, 5);
    LatticeBasis zn = LatticeBasis::standard(gens.front().size());
    LatticeBasis lattice = zn.restrict_to_span(gens);
    std::vector<QVector> prim;
    for (const auto& g : gens) prim.push_back(primitive_vector(g, lattice));
    Integer m = multiplicity(prim, lattice);
    auto w = waterman_points(prim, lattice);
    ASSERT_EQ(Integer(static_cast<unsigned long>(w.size())), m);
    ASSERT_EQ(m, oracle::count_cone_box_points(prim, lattice));
    for (std::size_t i = 0; i < w.size(); ++i) {
      ASSERT_TRUE(lattice.contains(w[i].point));
      for (const auto& a : w[i].coefficients) ASSERT_TRUE(a >= 0 && a < 1);
      for (std::size_t j = 0; j < i; ++j) {
        QVector diff = subtract(w[i].point, w[j].point);
        ASSERT_FALSE(LatticeBasis::from_generators(diff.size(), prim).contains(diff));
      }
    }
    ++checked;
  }
}

TEST(Multiplicity, FacesAreNoWorse) {
  std::mt19937 rng(22);
  for (int trial = 0; trial < 60; ++trial) {
    auto gens = gen::random_simplicial_generators(rng, 2 + trial % 3, 0, 5);
    Complex c = gen::cone_complex(gens);
    Integer top = multiplicity(c, c.maximal_cones()[0]);
    for (std::size_t i = 0; i < c.cone_count(); ++i) ASSERT_LE(multiplicity(c, i), top);
  }
}

TEST(ValidateComplex, Quadrant) { EXPECT_TRUE(validate_complex(positive_orthant(2)).ok()); }

TEST(ValidateComplex, OverlappingCones) {
  Complex c = complex_of(2, {qv({1, 0}), qv({1, 1}), qv({0, 1})}, {{0, 1}, {0, 2}});
  auto report = validate_complex(c);
  EXPECT_FALSE(report.ok());
}

TEST(ValidateComplex, NonPrimitiveRay) {
  Complex c = complex_of(2, {qv({2, 0}), qv({0, 1})}, {{0, 1}});
  auto report = validate_complex(c);
  ASSERT_FALSE(report.ok());
  EXPECT_NE(report.issues.front().find("primitive"), std::string::npos);
}

TEST(ValidateComplex, ConeWithLine) {
  Complex c = complex_of(2, {qv({1, 0}), qv({-1, 0}), qv({0, 1})}, {{0, 1, 2}});
  EXPECT_FALSE(validate_complex(c).ok());
}

TEST(ValidateComplex, LatticeMismatchOnSharedFace) {
  std::vector<ConeSpec> specs{{{0, 1}, LatticeBasis::standard(2)},
                              {{1, 2}, LatticeBasis::from_generators(2, {qv({0, 2}), qv({-1, 0})})}};
  Complex c(2, {qv({1, 0}), qv({0, 1}), qv({-1, 0})}, specs);
  EXPECT_FALSE(validate_complex(c).ok());
}

TEST(ValidateComplex, FanWithSharedFaces) {
  Complex c = complex_of(3, {qv({1, 0, 0}), qv({0, 1, 0}), qv({0, 0, 1}), qv({1, 1, 1}), qv({-1, 0, 0})},
                         {{0, 1, 3}, {1, 2, 3}, {0, 2, 3}, {1, 2, 4}});
  EXPECT_TRUE(validate_complex(c).ok()) << validate_complex(c).issues.front();
}

TEST(ValidateMorphism, Examples) {
  EXPECT_TRUE(validate_morphism(e1()).ok());
  EXPECT_TRUE(validate_morphism(identity_on(positive_orthant(3))).ok());
  ComplexMorphism bad(positive_orthant(2), positive_orthant(1), imat({{1, -1}}));
  auto report = validate_morphism(bad);
  ASSERT_FALSE(report.ok());
  EXPECT_NE(report.issues.front().find("kernel"), std::string::npos);
}

TEST(ValidateMorphism, LatticeMustMapIntoTargetLattice) {
  std::vector<ConeSpec> tspec{{{0}, LatticeBasis::from_generators(1, {qv({2})})}};
  Complex target(1, {qv({2})}, tspec);
  ComplexMorphism f(positive_orthant(1), target, imat({{1}}));
  EXPECT_FALSE(validate_morphism(f).ok());
}

TEST(RelativeDimension, Examples) {
  EXPECT_EQ(relative_dimension(identity_on(positive_orthant(3))), 0u);
  EXPECT_EQ(relative_dimension(e1()), 2u);
  EXPECT_EQ(relative_dimension(e3()), 1u);
}

TEST(CheckSemistable, Examples) {
  EXPECT_EQ(check_semistable(identity_on(positive_orthant(2))).verdict, Semistability::semistable);
  auto e1r = check_semistable(e1());
  EXPECT_EQ(e1r.verdict, Semistability::weakly_semistable);
  ASSERT_EQ(e1r.reasons.size(), 1u);
  EXPECT_NE(e1r.reasons[0].find("multiplicity 2"), std::string::npos);
  EXPECT_EQ(check_semistable(e3()).verdict, Semistability::weakly_semistable);
  // Identity on a singular cone: both sides singular.
  auto sing = check_semistable(identity_on(single_cone(2, {qv({1, 0}), qv({1, 2})})));
  EXPECT_EQ(sing.verdict, Semistability::neither);
  EXPECT_EQ(sing.reasons.size(), 2u);
}

TEST(CheckSemistable, LatticeSurjectivityFails) {
  // x -> 2x on the ray: image lattice 2Z is not the target lattice Z.
  ComplexMorphism f(positive_orthant(1), positive_orthant(1), imat({{2}}));
  auto r = check_semistable(f);
  EXPECT_EQ(r.verdict, Semistability::neither);
}

TEST(Complex, FacesAndCarrier) {
  auto f = e1();
  const Complex& c = f.source();
  EXPECT_EQ(c.cone_count(), 15u);
  EXPECT_EQ(c.maximal_cones().size(), 1u);
  auto car = c.carrier(qv({1, 1, 1, 1}));
  ASSERT_TRUE(car.has_value());
  EXPECT_EQ(c.cone(*car).dim, 4u);
  auto ray = c.carrier(qv({2, 0, 0, 0}));
  ASSERT_TRUE(ray.has_value());
  EXPECT_EQ(c.cone(*ray).dim, 1u);
  EXPECT_FALSE(c.carrier(qv({-1, 0, 0, 0})).has_value());
}
