#include "ssr/fiber.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace ssr {

namespace {

// c with f(v) = c u, or nullopt when f(v) is not on the ray.
std::optional<Rational> ray_multiple(const QVector& image, const QVector& u) {
  std::optional<Rational> c;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u[k] == 0) {
      if (image[k] != 0) return std::nullopt;
      continue;
    }
    Rational q = image[k] / u[k];
    if (c && *c != q) return std::nullopt;
    c = q;
  }
  if (!c || *c <= 0) return std::nullopt;
  return c;
}

}  // namespace

FiberSubcomplex fiber_subcomplex(const ComplexMorphism& f, std::size_t target_ray) {
  const Complex& src = f.source();
  const Complex& tgt = f.target();
  auto ray_cone = tgt.find({target_ray});
  if (!ray_cone) throw InvalidInput("unknown target ray " + std::to_string(target_ray));
  std::vector<bool> inside(src.cone_count(), false);
  for (std::size_t s = 0; s < src.cone_count(); ++s) {
    auto carrier = f.target_carrier(s);
    if (!carrier) throw InvalidInput("map is not simplicial on " + src.describe(s));
    if (*carrier != *ray_cone) continue;
    if (f.image_cone(s) != carrier) throw InvalidInput("map is not simplicial on " + src.describe(s));
    inside[s] = true;
  }
  ComplexBuilder fiber(src.ambient_dim());
  for (std::size_t s = 0; s < src.cone_count(); ++s) {
    if (!inside[s]) continue;
    bool top = true;
    for (std::size_t t = 0; t < src.cone_count() && top; ++t)
      if (t != s && inside[t] && src.is_face(s, t)) top = false;
    if (top) fiber.add_cone(src.generators(s), src.cone(s).lattice);
  }
  ComplexBuilder base(tgt.ambient_dim());
  base.add_cone({tgt.ray(target_ray)}, tgt.cone(*ray_cone).lattice);
  return {target_ray, tgt.ray(target_ray), ComplexMorphism(fiber.build(), base.build(), f.map())};
}

std::vector<QVector> cross_section_points(const std::vector<QVector>& generators, const LatticeBasis& lattice,
                                          const IntMatrix& map, const QVector& u, const Integer& m) {
  const std::size_t d = generators.size();
  if (lattice.rank() != d) throw std::invalid_argument("cross section needs a full-rank simplicial cone");
  std::vector<Rational> level;
  for (const auto& g : generators) {
    auto c = ray_multiple(mat_vec(map, g), u);
    if (!c) throw InvalidInput("generator " + to_string(g) + " does not map onto the ray");
    level.push_back(*c);
  }
  // Every lattice point of the cone is a box representative plus a nonnegative
  // integer combination of the generators.
  std::vector<QVector> points;
  std::vector<Integer> count(d);
  for (const auto& w : waterman_points(generators, lattice)) {
    Rational start = 0;
    for (std::size_t i = 0; i < d; ++i) start += w.coefficients[i] * level[i];
    std::function<void(std::size_t, const Rational&)> extend = [&](std::size_t i, const Rational& rest) {
      if (i == d) {
        if (rest != 0) return;
        QVector x = w.point;
        for (std::size_t j = 0; j < d; ++j) x = add(x, scale(generators[j], Rational(count[j])));
        points.push_back(std::move(x));
        return;
      }
      for (count[i] = 0; Rational(count[i]) * level[i] <= rest; ++count[i])
        extend(i + 1, rest - Rational(count[i]) * level[i]);
    };
    if (start <= Rational(m)) extend(0, Rational(m) - start);
  }
  std::sort(points.begin(), points.end());
  return points;
}

namespace {

// Whether every cell is nonsingular in the lattice of the m-alteration; the
// same lattices alter_lattices assigns, computed per base cone only once.
bool cells_nonsingular_after_dilation(const Complex& c, const StarCells& cells, const IntMatrix& map,
                                      const QVector& u, const Integer& m) {
  LatticeBasis target = LatticeBasis::from_generators(u.size(), {scale(u, Rational(m))});
  std::map<std::size_t, LatticeBasis> altered;
  for (const auto& cell : cells.cells) {
    auto it = altered.find(cell.base);
    if (it == altered.end())
      it = altered.emplace(cell.base, preimage_lattice(map, target, c.cone(cell.base).lattice)).first;
    std::vector<QVector> gens;
    for (auto r : cell.rays) gens.push_back(primitive_vector(cells.rays[r], it->second));
    if (multiplicity(gens, it->second) != 1) return false;
  }
  return true;
}

}  // namespace

RaySemistable semistabilize_over_ray(const FiberSubcomplex& fiber, const Integer& max_dilation) {
  const Complex& c = fiber.map.source();
  for (auto s : c.maximal_cones()) {
    if (c.cone(s).dim > 4)
      throw RelativeDimensionTooLarge("fiber over " + to_string(fiber.u) + " has relative dimension " +
                                      std::to_string(c.cone(s).dim - 1));
    if (!c.cone(s).simplicial) throw InvalidInput("fiber cone " + c.describe(s) + " is not simplicial");
  }
  // Every vertex of the cross section must be a lattice point: m is a multiple of all ray multiples.
  Integer step = 1;
  for (const auto& r : c.rays()) {
    auto k = ray_multiple(fiber.map.image(r), fiber.u);
    if (!k || k->get_den() != 1) throw InvalidInput("fiber ray " + to_string(r) + " does not map onto the ray");
    mpz_lcm(step.get_mpz_t(), step.get_mpz_t(), Integer(k->get_num()).get_mpz_t());
  }
  std::size_t target_ray = 0;  // index of the ray in the one-ray base complex
  // The placing triangulation inside one cone only depends on the points of
  // that cone, so cones are screened separately, the most singular first.
  std::vector<std::size_t> screen_order = c.maximal_cones();
  std::stable_sort(screen_order.begin(), screen_order.end(),
                   [&](std::size_t a, std::size_t b) { return multiplicity(c, a) > multiplicity(c, b); });
  for (Integer m = step; m <= max_dilation; m += step) {
    std::set<QVector> points;
    bool screened = true;
    for (auto s : screen_order) {
      auto own = cross_section_points(c.generators(s), c.cone(s).lattice, fiber.map.map(), fiber.u, m);
      points.insert(own.begin(), own.end());
      ComplexBuilder single(c.ambient_dim());
      single.add_cone(c.generators(s), c.cone(s).lattice);
      Complex cone = single.build();
      if (!cells_nonsingular_after_dilation(cone, star_cells(cone, own), fiber.map.map(), fiber.u, m)) {
        screened = false;
        break;
      }
    }
    if (!screened) continue;
    std::vector<QVector> ordered(points.begin(), points.end());
    auto seq = star_sequence(c, ordered);
    AlterationSpec spec;
    spec.multipliers[target_ray] = m;
    ComplexMorphism altered =
        alter_lattices(ComplexMorphism(seq.subdivision.result, fiber.map.target(), fiber.map.map()), spec);
    if (check_semistable(altered).verdict != Semistability::semistable) continue;
    Subdivision sub = std::move(seq.subdivision);
    auto starred = std::move(seq.starred);
    return {std::move(sub), m, std::move(starred)};
  }
  throw BoundExhausted("no semistable subdivision over " + to_string(fiber.u) + " with dilation up to " +
                       max_dilation.get_str());
}

bool restrict_semistable_check(const ComplexMorphism& f, std::size_t target_ray) {
  FiberSubcomplex fiber = fiber_subcomplex(f, target_ray);
  if (fiber.map.source().cone_count() == 0) return true;
  return check_semistable(fiber.map).verdict == Semistability::semistable;
}

}  // namespace ssr
