#pragma once

#include "ssr/alteration.hpp"
#include "ssr/subdivision.hpp"

namespace ssr {

// The part of the source lying over one target ray, as a morphism onto that ray.
struct FiberSubcomplex {
  std::size_t base_ray = 0;  // target ray id
  QVector u;                 // its primitive point
  ComplexMorphism map;
};

// The fiber over a ray of the target; empty fibers have no cones.
FiberSubcomplex fiber_subcomplex(const ComplexMorphism& f, std::size_t target_ray);

struct RaySemistable {
  Subdivision subdivision;  // of the fiber complex
  Integer multiplier;       // dilation m at the ray
  std::vector<QVector> points;  // star points, in the order applied
};

// Lattice points x of the cone with f(x) = m u.
std::vector<QVector> cross_section_points(const std::vector<QVector>& generators, const LatticeBasis& lattice,
                                          const IntMatrix& map, const QVector& u, const Integer& m);

// Searches m up to max_dilation for a star subdivision at all cross-section
// lattice points that is semistable after the m-alteration.
RaySemistable semistabilize_over_ray(const FiberSubcomplex& fiber, const Integer& max_dilation);

bool restrict_semistable_check(const ComplexMorphism& f, std::size_t target_ray);

}  // namespace ssr
