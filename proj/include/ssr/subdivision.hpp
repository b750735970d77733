#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ssr/morphism.hpp"

namespace ssr {

// Piecewise-linear function given by its values on the rays of a subdivision.
struct GoodFunction {
  std::vector<Rational> values;
  bool operator==(const GoodFunction&) const = default;
};

// `result` subdivides `base`; `certificate` lives on the rays of `result`.
struct Subdivision {
  Complex base;
  Complex result;
  GoodFunction certificate;
};

Subdivision trivial_subdivision(const Complex& c);

// Linear functional agreeing with psi on the rays of the cone, if psi is linear there.
std::optional<QVector> linear_piece(const Complex& c, std::size_t cone, const std::vector<Rational>& values);
Rational evaluate(const Complex& c, const GoodFunction& psi, const QVector& x);

// Two maximal cones of a subdivision meeting along a common facet that lies
// inside one cone of the base.
struct Wall {
  std::size_t left;
  std::size_t right;
  std::size_t wall;
};
std::vector<Wall> interior_walls(const Complex& sub, const Complex& base);
// psi(q) - l(q) for the opposite rays q of `right`, l the linear piece on `left`; the minimum.
Rational wall_bend(const Complex& sub, const Wall& w, const std::vector<Rational>& values);

struct ProjectivityReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

// Same support and cone-wise refinement, by containment and exact volumes.
ValidationReport check_refinement(const Complex& sub, const Complex& base);
ProjectivityReport verify_projectivity(const Complex& sub, const Complex& base, const GoodFunction& cert);

// first: A -> B, second: B -> C; returns C over A with a rescaled combined certificate.
Subdivision compose(const Subdivision& first, const Subdivision& second);

Subdivision star_subdivide(const Complex& c, const QVector& point);
Subdivision star_subdivide(const Subdivision& current, const QVector& point);

// Stars a simplicial complex at each point in turn; points on rays are skipped.
// Cells are tracked by ray ids before any complex is built.
struct StarCells {
  struct Step {
    std::size_t ray;
    std::vector<std::pair<std::size_t, Rational>> combination;  // ray = sum a * r over the carrier
  };
  struct Cell {
    std::vector<std::size_t> rays;  // sorted ids into `rays`
    std::size_t base;               // maximal cone of the starting complex
  };
  std::vector<QVector> rays;
  std::vector<Cell> cells;
  std::vector<Step> steps;
  std::vector<QVector> starred;
};
StarCells star_cells(const Complex& c, const std::vector<QVector>& points);

// The complex of star_cells with a certificate that lowers each new point by a
// power of 1/M below the current function, M doubled until verify_projectivity
// accepts.
struct StarSequence {
  Subdivision subdivision;
  std::vector<QVector> starred;
};
StarSequence star_sequence(const Complex& c, const std::vector<QVector>& points);

// Cone indices in ascending order: dimension, then ray ids.
std::vector<std::size_t> default_order(const Complex& c);
bool refines_face_order(const Complex& c, const std::vector<std::size_t>& order);

struct MBSData {
  std::map<std::size_t, QVector> points;  // marked cone -> interior lattice point
  std::vector<std::size_t> order;         // all cones, ascending
};

// Marks every ray without a point with its primitive point.
MBSData augment_rays(const Complex& c, MBSData data);
ValidationReport validate_mbs_data(const Complex& c, const MBSData& data);

Subdivision barycentric_subdivide(const Complex& c, const std::vector<std::size_t>& order);
Subdivision mbs_subdivide(const Complex& c, const MBSData& data);
// The complex of cones spanned by the points of the last marked faces along chains.
Complex chain_complex(const Complex& c, const MBSData& data);

Subdivision triangulate_pulling(const Complex& c, const std::vector<std::size_t>& ray_order);
Subdivision cut_by_hyperplanes(const Complex& c, const std::vector<QVector>& normals);

Complex pullback_refine(const ComplexMorphism& f, const Complex& target_sub);
// Source refinement with certificate psi o f, psi the certificate of target_sub.
Subdivision pullback_refine(const ComplexMorphism& f, const Subdivision& target_sub);

struct InducedMap {
  ComplexMorphism morphism;
  Subdivision source;
  Subdivision target;
};

class HypothesisViolation : public InvalidInput {
 public:
  HypothesisViolation(const std::string& what, std::size_t witness) : InvalidInput(what), witness_(witness) {}
  std::size_t witness() const { return witness_; }

 private:
  std::size_t witness_;
};

InducedMap induce_simplicial_map(const ComplexMorphism& f, const MBSData& data);
ComplexMorphism induced_simplicial_map(const ComplexMorphism& f, const MBSData& data);

}  // namespace ssr
