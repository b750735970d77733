#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ssr/cone.hpp"
#include "ssr/errors.hpp"
#include "ssr/lattice.hpp"

namespace ssr {

struct Cone {
  std::vector<std::size_t> rays;  // sorted ray ids
  LatticeBasis lattice;           // N_sigma, spanning the cone's linear span
  std::size_t dim = 0;
  bool simplicial = false;
};

struct ConeSpec {
  std::vector<std::size_t> rays;
  std::optional<LatticeBasis> lattice;  // default: integer points of the span
};

// An embedded complex of pointed rational cones with per-cone lattices.
// Rays are stored sorted; the zero cone is implicit. Faces of listed cones are
// generated, and conflicts found on the way are kept for validate_complex.
class Complex {
 public:
  Complex() = default;
  Complex(std::size_t ambient_dim, std::vector<QVector> rays, const std::vector<ConeSpec>& cones);

  std::size_t ambient_dim() const { return ambient_dim_; }
  const std::vector<QVector>& rays() const { return rays_; }
  const QVector& ray(std::size_t id) const { return rays_.at(id); }
  std::size_t cone_count() const { return cones_.size(); }
  const std::vector<Cone>& cones() const { return cones_; }
  const Cone& cone(std::size_t i) const { return cones_.at(i); }
  const ConeGeometry& geometry(std::size_t i) const { return geometry_.at(i); }
  const std::vector<std::size_t>& maximal_cones() const { return maximal_; }
  const std::vector<std::string>& construction_issues() const { return issues_; }

  std::vector<QVector> generators(std::size_t cone) const;
  std::optional<std::size_t> find(const std::vector<std::size_t>& sorted_rays) const;
  std::optional<std::size_t> find_ray(const QVector& v) const;
  // The cone whose relative interior contains x.
  std::optional<std::size_t> carrier(const QVector& x) const;
  // Cones whose rays are a subset of the given cone's rays, itself included.
  std::vector<std::size_t> faces_of(std::size_t cone) const;
  bool is_face(std::size_t face, std::size_t cone) const;
  bool simplicial() const;
  std::size_t dim() const;
  std::string describe(std::size_t cone) const;

  bool operator==(const Complex& other) const;

 private:
  std::size_t ambient_dim_ = 0;
  std::vector<QVector> rays_;
  std::vector<Cone> cones_;
  std::vector<ConeGeometry> geometry_;
  std::map<std::vector<std::size_t>, std::size_t> index_;
  std::vector<std::size_t> maximal_;
  std::vector<std::string> issues_;
};

// Collects cones given by ray vectors and assigns ray ids.
class ComplexBuilder {
 public:
  explicit ComplexBuilder(std::size_t ambient_dim) : ambient_dim_(ambient_dim) {}
  std::size_t add_ray(const QVector& v);
  void add_cone(const std::vector<QVector>& rays, const LatticeBasis& lattice);
  Complex build() const;

 private:
  std::size_t ambient_dim_;
  std::map<QVector, std::size_t> ray_ids_;
  std::vector<QVector> rays_;
  std::vector<ConeSpec> cones_;
};

ValidationReport validate_complex(const Complex& c);

Integer multiplicity(const std::vector<QVector>& generators, const LatticeBasis& lattice);
Integer multiplicity(const Complex& c, std::size_t cone);
// Maximum over maximal cones; 1 means nonsingular.
Integer max_multiplicity(const Complex& c);
bool is_nonsingular(const Complex& c);

struct WatermanPoint {
  QVector coefficients;  // 0 <= alpha_i < 1, one per generator
  QVector point;
};

// One representative per class of lattice / generator lattice, sorted by
// coefficient vector; the zero point comes first.
std::vector<WatermanPoint> waterman_points(const std::vector<QVector>& generators, const LatticeBasis& lattice);
std::vector<WatermanPoint> waterman_points(const Complex& c, std::size_t cone);

// Sum of the primitive points of a cone.
QVector barycenter(const Complex& c, std::size_t cone);

// Ray ids of the smallest face of `cone` containing x (x must lie in the cone).
std::vector<std::size_t> minimal_face_rays(const Complex& c, std::size_t cone, const QVector& x);

}  // namespace ssr
