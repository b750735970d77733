#pragma once

#include <optional>
#include <vector>

#include "ssr/linalg.hpp"

namespace ssr {

// A full-rank lattice inside a rational subspace of Q^n, kept in a canonical
// basis (scaled Hermite form) so equal lattices compare equal.
class LatticeBasis {
 public:
  LatticeBasis() = default;

  static LatticeBasis from_generators(std::size_t ambient_dim, const std::vector<QVector>& generators);
  static LatticeBasis standard(std::size_t ambient_dim);

  std::size_t ambient_dim() const { return span_.ambient_dim(); }
  std::size_t rank() const { return span_.dim(); }
  const QMatrix& basis() const { return span_.rows(); }
  std::vector<QVector> basis_vectors() const { return span_.rows().row_list(); }

  // Coordinates with respect to basis(); nullopt outside the rational span.
  std::optional<QVector> coordinates(const QVector& v) const { return span_.coordinates(v); }
  bool in_span(const QVector& v) const { return span_.contains(v); }
  bool contains(const QVector& v) const;
  bool contains(const LatticeBasis& other) const;

  // This lattice intersected with the span of `spanning`, which must lie in span().
  LatticeBasis restrict_to_span(const std::vector<QVector>& spanning) const;

  bool operator==(const LatticeBasis& other) const {
    return ambient_dim() == other.ambient_dim() && basis() == other.basis();
  }

 private:
  explicit LatticeBasis(EchelonBasis span) : span_(std::move(span)) {}
  EchelonBasis span_;
};

// First lattice point on the ray through v.
QVector primitive_vector(const QVector& v, const LatticeBasis& lattice);

// [sup : sub]; nullopt encodes an infinite index (rank drop).
std::optional<Integer> lattice_index(const LatticeBasis& sub, const LatticeBasis& sup);

// { x in source_sup : map x in target }.
LatticeBasis preimage_lattice(const IntMatrix& map, const LatticeBasis& target, const LatticeBasis& source_sup);

LatticeBasis image_lattice(const IntMatrix& map, const LatticeBasis& lattice);

}  // namespace ssr
