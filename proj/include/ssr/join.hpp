#pragma once

#include <map>

#include "ssr/subdivision.hpp"

namespace ssr {

struct JoinResult {
  Subdivision subdivision;  // of the source
  ComplexMorphism morphism;
};

// Target ray id of the target ray that a source ray maps onto.
std::size_t fiber_of_ray(const ComplexMorphism& f, std::size_t source_ray);

// Inside every source cone, joins the restrictions of the fiber subdivisions
// (keyed by target ray id; missing fibers stay unchanged). The certificate is
// the sum of the fiber certificates.
JoinResult join_fiberwise(const ComplexMorphism& f, const std::map<std::size_t, Subdivision>& fiber_subs);

}  // namespace ssr
