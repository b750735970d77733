#pragma once

// Shared test inputs: the reference examples and small builders.

#include <initializer_list>
#include <vector>

#include "ssr/morphism.hpp"

namespace fixtures {

using namespace ssr;

inline QVector qv(std::initializer_list<long> v) { return QVector(v.begin(), v.end()); }

inline IntMatrix imat(std::vector<std::vector<long>> rows) {
  std::vector<std::vector<Integer>> r;
  for (auto& row : rows) {
    std::vector<Integer> x;
    for (long v : row) x.emplace_back(v);
    r.push_back(std::move(x));
  }
  return IntMatrix::from_rows(r);
}

// Complex from ray vectors and maximal cones given as ray index lists; default lattices.
inline Complex complex_of(std::size_t n, std::vector<QVector> rays, std::vector<std::vector<std::size_t>> cones) {
  std::vector<ConeSpec> specs;
  for (auto& c : cones) specs.push_back({c, std::nullopt});
  return Complex(n, std::move(rays), specs);
}

inline Complex single_cone(std::size_t n, std::vector<QVector> rays) {
  std::vector<std::size_t> all;
  for (std::size_t i = 0; i < rays.size(); ++i) all.push_back(i);
  return complex_of(n, std::move(rays), {all});
}

inline Complex positive_orthant(std::size_t n) {
  std::vector<QVector> rays;
  for (std::size_t i = 0; i < n; ++i) rays.push_back(unit_vector(n, i));
  return single_cone(n, rays);
}

// f(a,b,c,d) = (a,b) on <(1,0,0,0),(1,0,1,0),(0,1,0,0),(0,1,1,2)> over the quadrant.
inline ComplexMorphism e1() {
  return ComplexMorphism(single_cone(4, {qv({1, 0, 0, 0}), qv({1, 0, 1, 0}), qv({0, 1, 0, 0}), qv({0, 1, 1, 2})}),
                         positive_orthant(2), imat({{1, 0, 0, 0}, {0, 1, 0, 0}}));
}

// f(a,b) = a on <(1,0),(1,2)> over the nonnegative half line.
inline ComplexMorphism e3() {
  return ComplexMorphism(single_cone(2, {qv({1, 0}), qv({1, 2})}), positive_orthant(1), imat({{1, 0}}));
}

// Relative dimension 3 over the quadrant: three rays over u1 and two over u2,
// multiplicity 3. One interior Waterman point has coefficient sums (2, 1); its
// reflection maps to u1 + u2.
inline ComplexMorphism reflection_case() {
  return ComplexMorphism(single_cone(5, {qv({1, 0, 0, 0, 0}), qv({1, 0, 1, 0, 0}), qv({1, 0, 0, 1, 0}),
                                         qv({0, 1, 0, 0, 0}), qv({0, 1, 2, 2, 3})}),
                         positive_orthant(2), imat({{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}}));
}

inline ComplexMorphism identity_on(const Complex& c) {
  return ComplexMorphism(c, c, IntMatrix::identity(c.ambient_dim()));
}

}  // namespace fixtures
