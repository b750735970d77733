#pragma once

#include "ssr/subdivision.hpp"

namespace ssr {

// A Waterman point interior to a face that maps onto a target barycenter.
struct BarycentricWaterman {
  std::size_t face = 0;
  WatermanPoint waterman;
  std::size_t target_cone = 0;  // f(point) is its barycenter
};

BarycentricWaterman find_barycentric_waterman(const ComplexMorphism& f, std::size_t cone);

struct MarkedPoint {
  std::size_t singular_cone = 0;
  BarycentricWaterman waterman;
  std::vector<std::size_t> complement_face;  // rays of the face added to the Waterman point
  QVector point;
  std::size_t carrier = 0;
};

// Candidate points for every singular cone, before pruning.
std::vector<MarkedPoint> marked_points(const ComplexMorphism& f);

// Order: cones where f is injective first, then image dimension, dimension, ray ids.
std::vector<std::size_t> reduction_order(const ComplexMorphism& f);

MBSData build_marked_data(const ComplexMorphism& f);

// One round: marked subdivision of the source over the barycentric subdivision
// of the target. The source multiplicity must drop.
InducedMap reduce_step(const ComplexMorphism& f);
InducedMap reduce_step(const ComplexMorphism& f, const MBSData& data);

}  // namespace ssr
