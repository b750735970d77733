#include "ssr/morphism.hpp"

#include <stdexcept>

namespace ssr {

ComplexMorphism::ComplexMorphism(Complex source, Complex target, IntMatrix map)
    : source_(std::move(source)), target_(std::move(target)), map_(std::move(map)) {
  if (map_.cols() != source_.ambient_dim() || map_.rows() != target_.ambient_dim())
    throw std::invalid_argument("matrix is " + std::to_string(map_.rows()) + "x" + std::to_string(map_.cols()) +
                                " but the complexes live in dimensions " + std::to_string(source_.ambient_dim()) +
                                " -> " + std::to_string(target_.ambient_dim()));
}

std::vector<QVector> ComplexMorphism::image_generators(std::size_t source_cone) const {
  std::vector<QVector> out;
  for (const auto& g : source_.generators(source_cone)) out.push_back(image(g));
  return out;
}

std::size_t ComplexMorphism::image_dim(std::size_t source_cone) const {
  return rank_of(image_generators(source_cone), target_.ambient_dim());
}

bool ComplexMorphism::injective_on(std::size_t source_cone) const {
  return image_dim(source_cone) == source_.cone(source_cone).dim;
}

std::optional<std::size_t> ComplexMorphism::target_carrier(std::size_t source_cone) const {
  auto images = image_generators(source_cone);
  QVector sum(target_.ambient_dim());
  for (const auto& y : images) sum = add(sum, y);
  auto carrier = target_.carrier(sum);
  if (!carrier) return std::nullopt;
  for (const auto& y : images)
    if (!target_.geometry(*carrier).contains(y)) return std::nullopt;
  return carrier;
}

std::optional<std::size_t> ComplexMorphism::image_cone(std::size_t source_cone) const {
  auto carrier = target_carrier(source_cone);
  if (!carrier) return std::nullopt;
  auto images = image_generators(source_cone);
  for (auto id : target_.cone(*carrier).rays) {
    QVector u = primitive_integer_direction(target_.ray(id));
    bool hit = false;
    for (const auto& y : images)
      if (!is_zero(y) && primitive_integer_direction(y) == u) hit = true;
    if (!hit) return std::nullopt;
  }
  return carrier;
}

ValidationReport validate_morphism(const ComplexMorphism& f) {
  ValidationReport report;
  const Complex& src = f.source();
  const Complex& tgt = f.target();
  for (auto i : src.maximal_cones()) {
    auto images = f.image_generators(i);
    if (has_positive_circuit(images, tgt.ambient_dim())) {
      report.issues.push_back("kernel of the map meets cone " + src.describe(i) + " outside the origin");
      continue;
    }
    auto carrier = f.target_carrier(i);
    if (!carrier) {
      report.issues.push_back("image of cone " + src.describe(i) + " lies in no target cone");
      continue;
    }
    const LatticeBasis& nt = tgt.cone(*carrier).lattice;
    for (const auto& b : src.cone(i).lattice.basis_vectors())
      if (!nt.contains(f.image(b))) {
        report.issues.push_back("lattice of cone " + src.describe(i) + " does not map into the lattice of " +
                                tgt.describe(*carrier));
        break;
      }
  }
  return report;
}

std::size_t relative_dimension(const ComplexMorphism& f) {
  std::size_t r = 0;
  for (std::size_t i = 0; i < f.source().cone_count(); ++i) {
    std::size_t d = f.source().cone(i).dim;
    std::size_t e = f.image_dim(i);
    if (d > e && d - e > r) r = d - e;
  }
  return r;
}

bool is_simplicial_map(const ComplexMorphism& f) {
  if (!f.source().simplicial()) return false;
  for (std::size_t i = 0; i < f.source().cone_count(); ++i)
    if (!f.image_cone(i)) return false;
  return true;
}

std::string to_string(Semistability s) {
  switch (s) {
    case Semistability::semistable:
      return "semistable";
    case Semistability::weakly_semistable:
      return "weakly-semistable";
    case Semistability::neither:
      return "neither";
  }
  return "neither";
}

SemistabilityReport check_semistable(const ComplexMorphism& f) {
  auto valid = validate_morphism(f);
  if (!valid.ok()) throw ValidationError("morphism is not valid", valid.issues);
  const Complex& src = f.source();
  const Complex& tgt = f.target();
  SemistabilityReport report;
  bool source_ok = true;
  bool rest_ok = true;
  for (auto i : src.maximal_cones()) {
    if (!src.cone(i).simplicial) {
      report.reasons.push_back("source cone " + src.describe(i) + " is not simplicial");
      source_ok = false;
    } else if (multiplicity(src, i) != 1) {
      report.reasons.push_back("source cone " + src.describe(i) + " is singular (multiplicity " +
                               multiplicity(src, i).get_str() + ")");
      source_ok = false;
    }
  }
  for (auto i : tgt.maximal_cones()) {
    if (!tgt.cone(i).simplicial) {
      report.reasons.push_back("target cone " + tgt.describe(i) + " is not simplicial");
      rest_ok = false;
    } else if (multiplicity(tgt, i) != 1) {
      report.reasons.push_back("target cone " + tgt.describe(i) + " is singular (multiplicity " +
                               multiplicity(tgt, i).get_str() + ")");
      rest_ok = false;
    }
  }
  std::vector<bool> covered(tgt.cone_count(), false);
  for (std::size_t i = 0; i < src.cone_count(); ++i) {
    auto image = f.image_cone(i);
    if (!image) {
      report.reasons.push_back("image of source cone " + src.describe(i) + " is not a cone of the target");
      rest_ok = false;
      continue;
    }
    covered[*image] = true;
    LatticeBasis pushed = image_lattice(f.map(), src.cone(i).lattice);
    if (!(pushed == tgt.cone(*image).lattice)) {
      report.reasons.push_back("lattice of source cone " + src.describe(i) + " does not map onto the lattice of " +
                               tgt.describe(*image));
      rest_ok = false;
    }
  }
  for (auto i : tgt.maximal_cones())
    if (!covered[i]) {
      report.reasons.push_back("target cone " + tgt.describe(i) + " is not the image of any source cone");
      rest_ok = false;
    }
  if (source_ok && rest_ok)
    report.verdict = Semistability::semistable;
  else if (rest_ok)
    report.verdict = Semistability::weakly_semistable;
  else
    report.verdict = Semistability::neither;
  return report;
}

}  // namespace ssr
