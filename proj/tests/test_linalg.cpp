#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "ssr/lattice.hpp"
#include "ssr/linalg.hpp"

using namespace ssr;

namespace {

IntMatrix imat(std::vector<std::vector<long>> rows) {
  std::vector<std::vector<Integer>> r;
  for (auto& row : rows) {
    std::vector<Integer> x;
    for (long v : row) x.emplace_back(v);
    r.push_back(std::move(x));
  }
  return IntMatrix::from_rows(r);
}

QVector qv(std::vector<long> v) { return QVector(v.begin(), v.end()); }

LatticeBasis lat(std::size_t n, std::vector<std::vector<long>> gens) {
  std::vector<QVector> g;
  for (auto& v : gens) g.push_back(qv(v));
  return LatticeBasis::from_generators(n, g);
}

bool is_hermite(const IntMatrix& h) {
  std::size_t last = 0;
  bool zero_seen = false;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    std::size_t p = 0;
    while (p < h.cols() && h(i, p) == 0) ++p;
    if (p == h.cols()) {
      zero_seen = true;
      continue;
    }
    if (zero_seen || (i > 0 && p <= last)) return false;
    if (h(i, p) <= 0) return false;
    for (std::size_t k = 0; k < i; ++k)
      if (h(k, p) < 0 || h(k, p) >= h(i, p)) return false;
    last = p;
  }
  return true;
}

IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

}  // namespace

TEST(Hermite, IdentityIsFixed) {
  auto hf = hermite_normal_form(IntMatrix::identity(2));
  EXPECT_EQ(hf.h, IntMatrix::identity(2));
  EXPECT_EQ(hf.u, IntMatrix::identity(2));
}

TEST(Hermite, AlreadyReduced) {
  IntMatrix m = imat({{2, 4}, {0, 6}});
  auto hf = hermite_normal_form(m);
  EXPECT_EQ(hf.h, m);
  EXPECT_EQ(hf.u, IntMatrix::identity(2));
}

TEST(Hermite, RowSwap) {
  IntMatrix m = imat({{0, 1}, {1, 0}});
  auto hf = hermite_normal_form(m);
  EXPECT_EQ(hf.h, IntMatrix::identity(2));
  EXPECT_EQ(hf.u * m, hf.h);
}

TEST(Hermite, RandomReconstruction) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t r = 1 + trial % 4, c = 1 + (trial / 4) % 5;
    IntMatrix m = random_matrix(rng, r, c, -6, 6);
    auto hf = hermite_normal_form(m);
    ASSERT_EQ(hf.u * m, hf.h);
    ASSERT_EQ(abs_value(determinant(hf.u)), 1);
    ASSERT_TRUE(is_hermite(hf.h));
    ASSERT_EQ(rank(to_rational(hf.h)), rank(to_rational(m)));
  }
}

TEST(Smith, Examples) {
  auto s1 = smith_normal_form(IntMatrix::identity(3));
  EXPECT_EQ(s1.s, IntMatrix::identity(3));
  auto s2 = smith_normal_form(imat({{2, 0}, {0, 2}}));
  EXPECT_EQ(s2.s, imat({{2, 0}, {0, 2}}));
  IntMatrix e1 = imat({{1, 0, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 0}, {0, 1, 1, 2}});
  auto s3 = smith_normal_form(e1);
  EXPECT_EQ(s3.s, imat({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 2}}));
  EXPECT_EQ(s3.u * e1 * s3.v, s3.s);
}

TEST(Smith, RandomReconstructionAndDivisibility) {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t r = 1 + trial % 4, c = 1 + (trial / 4) % 4;
    IntMatrix m = random_matrix(rng, r, c, -6, 6);
    auto sf = smith_normal_form(m);
    ASSERT_EQ(sf.u * m * sf.v, sf.s);
    ASSERT_EQ(abs_value(determinant(sf.u)), 1);
    ASSERT_EQ(abs_value(determinant(sf.v)), 1);
    std::size_t n = std::min(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (i != j) ASSERT_EQ(sf.s(i, j), 0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      ASSERT_GE(sf.s(i, i), 0);
      if (sf.s(i, i) == 0)
        ASSERT_EQ(sf.s(i + 1, i + 1), 0);
      else
        ASSERT_EQ(sf.s(i + 1, i + 1) % sf.s(i, i), 0);
    }
  }
}

TEST(Determinant, MatchesCofactorOracle) {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + trial % 4;
    IntMatrix m = random_matrix(rng, n, n, -5, 5);
    ASSERT_EQ(determinant(m), oracle::cofactor_determinant(m));
    ASSERT_EQ(Rational(determinant(m)), determinant(to_rational(m)));
  }
}

TEST(IntegerKernel, SpansAllIntegerSolutions) {
  std::mt19937 rng(14);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t r = 1 + trial % 3, c = 2 + trial % 3;
    IntMatrix m = random_matrix(rng, r, c, -3, 3);
    IntMatrix k = integer_kernel(m);
    ASSERT_EQ(k.rows(), c - rank(to_rational(m)));
    std::vector<QVector> kernel_rows;
    for (std::size_t i = 0; i < k.rows(); ++i) {
      auto row = k.row(i);
      kernel_rows.emplace_back(row.begin(), row.end());
      ASSERT_TRUE(is_zero(mat_vec(m, kernel_rows.back())));
    }
    // Every small integer solution is an integer combination of the kernel rows.
    LatticeBasis kl = LatticeBasis::from_generators(c, kernel_rows);
    for (const auto& z : oracle::integer_points_in_box(c, -2, 2))
      if (is_zero(mat_vec(m, z))) ASSERT_TRUE(kl.contains(z)) << to_string(z);
  }
}

TEST(PrimitiveVector, Examples) {
  EXPECT_EQ(primitive_vector(qv({2, 4}), LatticeBasis::standard(2)), qv({1, 2}));
  EXPECT_EQ(primitive_vector(qv({1, 1}), lat(2, {{2, 0}, {0, 2}})), qv({2, 2}));
  EXPECT_EQ(primitive_vector(qv({3, 0}), LatticeBasis::standard(2)), qv({1, 0}));
  EXPECT_THROW(primitive_vector(qv({0, 0}), LatticeBasis::standard(2)), std::invalid_argument);
  EXPECT_THROW(primitive_vector(qv({1, 1}), lat(2, {{1, 0}})), std::invalid_argument);
}

TEST(PrimitiveVector, IdempotentAndScaleInvariant) {
  std::mt19937 rng(15);
  std::uniform_int_distribution<int> d(-6, 6);
  for (int trial = 0; trial < 100; ++trial) {
    LatticeBasis l = lat(3, {{d(rng), d(rng), d(rng)}, {d(rng), d(rng), d(rng)}, {d(rng), d(rng), d(rng)}});
    QVector v{d(rng), d(rng), d(rng)};
    if (is_zero(v) || !l.in_span(v)) continue;
    QVector p = primitive_vector(v, l);
    ASSERT_TRUE(l.contains(p));
    ASSERT_EQ(primitive_vector(p, l), p);
    for (int k = 2; k <= 4; ++k) ASSERT_EQ(primitive_vector(scale(v, k), l), p);
  }
}

TEST(LatticeIndex, Examples) {
  EXPECT_EQ(*lattice_index(lat(2, {{2, 0}, {0, 2}}), LatticeBasis::standard(2)), 4);
  EXPECT_EQ(*lattice_index(lat(4, {{1, 0, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 0}, {0, 1, 1, 2}}), LatticeBasis::standard(4)), 2);
  EXPECT_FALSE(lattice_index(lat(2, {{1, 0}}), LatticeBasis::standard(2)).has_value());
  EXPECT_THROW(lattice_index(LatticeBasis::standard(2), lat(2, {{2, 0}, {0, 2}})), std::invalid_argument);
}

TEST(LatticeIndex, MatchesCosetCountOracle) {
  std::mt19937 rng(16);
  std::uniform_int_distribution<int> d(-5, 5);
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 120; ++trial) {
    std::size_t n = 2 + trial % 2;
    std::vector<QVector> gens;
    for (std::size_t i = 0; i < n; ++i) {
      QVector g(n);
      for (auto& x : g) x = d(rng);
      gens.push_back(g);
    }
    if (rank_of(gens, n) < n) continue;
    auto idx = lattice_index(LatticeBasis::from_generators(n, gens), LatticeBasis::standard(n));
    ASSERT_TRUE(idx.has_value());
    ASSERT_EQ(*idx, oracle::count_parallelepiped_points(gens));
    ++checked;
  }
  EXPECT_GE(checked, 100);
}

TEST(Preimage, Examples) {
  IntMatrix doubling = imat({{2}});
  EXPECT_EQ(preimage_lattice(doubling, lat(1, {{2}}), LatticeBasis::standard(1)), LatticeBasis::standard(1));
  EXPECT_EQ(preimage_lattice(IntMatrix::identity(2), LatticeBasis::standard(2), LatticeBasis::standard(2)),
            LatticeBasis::standard(2));
  EXPECT_EQ(preimage_lattice(imat({{1, 0}}), lat(1, {{3}}), LatticeBasis::standard(2)), lat(2, {{3, 0}, {0, 1}}));
  EXPECT_THROW(preimage_lattice(imat({{1, 0}}), lat(2, {{3, 0}}), LatticeBasis::standard(2)), std::invalid_argument);
}

TEST(Preimage, ContainedAndMapsIntoTarget) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> d(-3, 3);
  std::uniform_int_distribution<int> m(1, 4);
  for (int trial = 0; trial < 80; ++trial) {
    IntMatrix map = random_matrix(rng, 2, 3, -2, 2);
    LatticeBasis target = lat(2, {{m(rng), d(rng)}, {0, m(rng)}});
    LatticeBasis source = lat(3, {{1, d(rng), 0}, {0, m(rng), d(rng)}, {0, 0, m(rng)}});
    LatticeBasis pre = preimage_lattice(map, target, source);
    ASSERT_TRUE(source.contains(pre));
    for (const auto& b : pre.basis_vectors()) ASSERT_TRUE(target.contains(mat_vec(map, b)));
    // Oracle: every small source point mapping into the target is in the preimage.
    for (const auto& c : oracle::integer_points_in_box(3, -2, 2)) {
      QVector x = vec_mat(c, source.basis());
      if (target.contains(mat_vec(map, x))) ASSERT_TRUE(pre.contains(x));
    }
  }
}

TEST(Lattice, CanonicalFormIgnoresGeneratorChoice) {
  EXPECT_EQ(lat(2, {{1, 0}, {0, 1}}), lat(2, {{1, 1}, {0, 1}}));
  EXPECT_EQ(lat(2, {{2, 0}, {0, 2}, {2, 2}}), lat(2, {{2, 2}, {0, 2}}));
  EXPECT_FALSE(lat(2, {{2, 0}, {0, 1}}) == LatticeBasis::standard(2));
}

TEST(Lattice, RestrictToSpan) {
  LatticeBasis z3 = LatticeBasis::standard(3);
  LatticeBasis r = z3.restrict_to_span({qv({2, 2, 0}), qv({0, 0, 3})});
  EXPECT_EQ(r, lat(3, {{1, 1, 0}, {0, 0, 1}}));
  LatticeBasis coarse = lat(2, {{2, 0}, {0, 2}});
  EXPECT_EQ(coarse.restrict_to_span({qv({1, 1})}), lat(2, {{2, 2}}));
}
