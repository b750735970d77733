#include "ssr/join.hpp"

#include <algorithm>

namespace ssr {

std::size_t fiber_of_ray(const ComplexMorphism& f, std::size_t source_ray) {
  const Complex& src = f.source();
  const Complex& tgt = f.target();
  auto cone = src.find({source_ray});
  auto image = cone ? f.image_cone(*cone) : std::nullopt;
  if (!image || tgt.cone(*image).dim != 1)
    throw InvalidInput("source ray " + to_string(src.ray(source_ray)) + " does not map onto a target ray");
  return tgt.cone(*image).rays[0];
}

JoinResult join_fiberwise(const ComplexMorphism& f, const std::map<std::size_t, Subdivision>& fiber_subs) {
  const Complex& src = f.source();
  std::vector<std::size_t> fiber(src.rays().size());
  for (std::size_t r = 0; r < fiber.size(); ++r) fiber[r] = fiber_of_ray(f, r);

  ComplexBuilder builder(src.ambient_dim());
  for (auto s : src.maximal_cones()) {
    const Cone& cone = src.cone(s);
    std::map<std::size_t, std::vector<std::size_t>> parts;
    for (auto id : cone.rays) parts[fiber[id]].push_back(id);
    // Choices of cells per part; untouched parts contribute themselves.
    std::vector<std::vector<std::vector<QVector>>> choices;
    for (const auto& [ray, ids] : parts) {
      auto face = src.find(ids);
      if (!face) throw InvariantViolation("fiber part of " + src.describe(s) + " is not a face");
      auto it = fiber_subs.find(ray);
      if (it == fiber_subs.end()) {
        choices.push_back({src.generators(*face)});
        continue;
      }
      const Complex& sub = it->second.result;
      const ConeGeometry& part = src.geometry(*face);
      std::vector<std::vector<QVector>> cells;
      for (std::size_t c = 0; c < sub.cone_count(); ++c) {
        if (sub.cone(c).dim != part.dim()) continue;
        bool inside = true;
        for (const auto& g : sub.generators(c))
          if (!part.contains(g)) inside = false;
        if (inside) cells.push_back(sub.generators(c));
      }
      if (cells.empty()) throw InvalidInput("fiber subdivision does not cover " + src.describe(*face));
      choices.push_back(std::move(cells));
    }
    std::vector<std::size_t> pick(choices.size(), 0);
    while (true) {
      std::vector<QVector> gens;
      for (std::size_t i = 0; i < choices.size(); ++i)
        for (const auto& g : choices[i][pick[i]]) gens.push_back(g);
      builder.add_cone(gens, cone.lattice);
      std::size_t i = 0;
      while (i < pick.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
      if (i == pick.size()) break;
    }
  }
  Complex result = builder.build();
  ComplexMorphism morphism(result, f.target(), f.map());

  GoodFunction cert;
  for (std::size_t r = 0; r < result.rays().size(); ++r) {
    std::size_t ray = fiber_of_ray(morphism, r);
    auto it = fiber_subs.find(ray);
    cert.values.push_back(it == fiber_subs.end() ? Rational(0)
                                                 : evaluate(it->second.result, it->second.certificate, result.ray(r)));
  }
  Subdivision sub{src, std::move(result), std::move(cert)};
  auto report = verify_projectivity(sub.result, sub.base, sub.certificate);
  if (!report.ok()) throw InvariantViolation("join certificate rejected: " + report.issues.front());
  return {std::move(sub), std::move(morphism)};
}

}  // namespace ssr
