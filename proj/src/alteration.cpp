#include "ssr/alteration.hpp"

namespace ssr {

bool AlterationSpec::trivial() const {
  for (const auto& [ray, m] : multipliers)
    if (m != 1) return false;
  return true;
}

ComplexMorphism alter_lattices(const ComplexMorphism& f, const AlterationSpec& spec) {
  const Complex& src = f.source();
  const Complex& tgt = f.target();
  if (!tgt.simplicial()) throw InvalidInput("lattice alteration needs a simplicial target");
  for (const auto& [ray, m] : spec.multipliers) {
    if (ray >= tgt.rays().size()) throw InvalidInput("alteration names unknown target ray " + std::to_string(ray));
    if (m <= 0) throw InvalidInput("alteration multipliers must be positive");
  }
  if (spec.trivial()) return f;

  auto altered = [&](std::size_t cone) {
    std::vector<QVector> gens;
    for (auto id : tgt.cone(cone).rays) gens.push_back(scale(tgt.ray(id), Rational(spec.at(id))));
    return gens;
  };

  ComplexBuilder target(tgt.ambient_dim());
  for (auto t : tgt.maximal_cones()) {
    auto gens = altered(t);
    target.add_cone(gens, LatticeBasis::from_generators(tgt.ambient_dim(), gens));
  }
  ComplexBuilder source(src.ambient_dim());
  for (auto s : src.maximal_cones()) {
    auto carrier = f.target_carrier(s);
    if (!carrier) throw InvalidInput("source cone " + src.describe(s) + " maps into no target cone");
    LatticeBasis sub = LatticeBasis::from_generators(tgt.ambient_dim(), altered(*carrier));
    LatticeBasis lattice = preimage_lattice(f.map(), sub, src.cone(s).lattice);
    std::vector<QVector> gens;
    for (const auto& g : src.generators(s)) gens.push_back(primitive_vector(g, lattice));
    source.add_cone(gens, lattice);
  }
  ComplexMorphism result(source.build(), target.build(), f.map());
  auto report = validate_morphism(result);
  if (!report.ok()) throw InvariantViolation("altered morphism is invalid: " + report.issues.front());
  return result;
}

}  // namespace ssr
