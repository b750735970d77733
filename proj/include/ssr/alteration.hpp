#pragma once

#include <map>

#include "ssr/morphism.hpp"

namespace ssr {

// Multiplier per target ray id; missing rays keep multiplier 1.
struct AlterationSpec {
  std::map<std::size_t, Integer> multipliers;

  Integer at(std::size_t ray) const {
    auto it = multipliers.find(ray);
    return it == multipliers.end() ? Integer(1) : it->second;
  }
  bool trivial() const;
};

// Target cones get the lattice spanned by m_i u_i; source cones get the
// preimage of that lattice inside their own.
ComplexMorphism alter_lattices(const ComplexMorphism& f, const AlterationSpec& spec);

}  // namespace ssr
