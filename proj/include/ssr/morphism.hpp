#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ssr/complex.hpp"

namespace ssr {

// A morphism of complexes given by one ambient integer matrix.
class ComplexMorphism {
 public:
  ComplexMorphism() = default;
  ComplexMorphism(Complex source, Complex target, IntMatrix map);

  const Complex& source() const { return source_; }
  const Complex& target() const { return target_; }
  const IntMatrix& map() const { return map_; }

  QVector image(const QVector& x) const { return ssr::mat_vec(map_, x); }
  std::vector<QVector> image_generators(std::size_t source_cone) const;
  std::size_t image_dim(std::size_t source_cone) const;
  bool injective_on(std::size_t source_cone) const;
  // Smallest target cone containing the image of the source cone.
  std::optional<std::size_t> target_carrier(std::size_t source_cone) const;
  // The target cone equal to the image, when the image is a cone of the target.
  std::optional<std::size_t> image_cone(std::size_t source_cone) const;

  bool operator==(const ComplexMorphism& o) const {
    return map_ == o.map_ && source_ == o.source_ && target_ == o.target_;
  }

 private:
  Complex source_;
  Complex target_;
  IntMatrix map_;
};

ValidationReport validate_morphism(const ComplexMorphism& f);

std::size_t relative_dimension(const ComplexMorphism& f);

// Source simplicial and every source cone maps onto a target cone.
bool is_simplicial_map(const ComplexMorphism& f);

enum class Semistability { semistable, weakly_semistable, neither };
std::string to_string(Semistability s);

struct SemistabilityReport {
  Semistability verdict = Semistability::neither;
  std::vector<std::string> reasons;
};

SemistabilityReport check_semistable(const ComplexMorphism& f);

}  // namespace ssr
