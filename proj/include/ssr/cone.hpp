#pragma once

#include <vector>

#include "ssr/linalg.hpp"

namespace ssr {

// Facet/span description of the cone generated by a finite set of vectors.
class ConeGeometry {
 public:
  struct Facet {
    QVector normal;                       // in the span, nonnegative on the cone
    std::vector<std::size_t> generators;  // generators lying on the facet
  };

  ConeGeometry() = default;
  ConeGeometry(std::vector<QVector> generators, std::size_t ambient_dim);

  std::size_t ambient_dim() const { return span_.ambient_dim(); }
  std::size_t dim() const { return span_.dim(); }
  const std::vector<QVector>& generators() const { return generators_; }
  const EchelonBasis& span() const { return span_; }
  const std::vector<Facet>& facets() const { return facets_; }
  bool independent() const { return generators_.size() == dim(); }

  bool contains(const QVector& x) const;
  bool in_relative_interior(const QVector& x) const;
  bool pointed() const;
  std::vector<std::size_t> extreme_generators() const;
  // Nonzero faces as sets of generator indices, the cone itself included.
  std::vector<std::vector<std::size_t>> faces() const;
  // Simplices (generator index sets) of the pulling triangulation in which
  // generators with smaller rank are pulled first.
  std::vector<std::vector<std::size_t>> pulling_triangulation(const std::vector<std::size_t>& rank) const;
  // Linear functional on the span taking the given values on the generators.
  std::optional<QVector> linear_functional(const QVector& values) const;

 private:
  std::vector<QVector> generators_;
  EchelonBasis span_;
  std::vector<Facet> facets_;
};

// Extreme rays (primitive integer directions) of the pointed cone
// { x : a.x >= 0 for a in inequalities, e.x = 0 for e in equalities }.
std::vector<QVector> extreme_rays(const std::vector<QVector>& inequalities, const std::vector<QVector>& equalities,
                                  std::size_t ambient_dim);

// True when some nonnegative, not-all-zero combination of the vectors is zero.
bool has_positive_circuit(const std::vector<QVector>& vectors, std::size_t ambient_dim);

// Calls visit(subset) for every k-subset of {0..n-1} in lexicographic order.
template <class Visit>
void for_each_subset(std::size_t n, std::size_t k, Visit&& visit) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    visit(idx);
    if (k == 0) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace ssr
