#include "ssr/reduction.hpp"

#include <algorithm>
#include <tuple>

namespace ssr {

BarycentricWaterman find_barycentric_waterman(const ComplexMorphism& f, std::size_t cone) {
  const Complex& src = f.source();
  const Complex& tgt = f.target();
  if (!src.cone(cone).simplicial || multiplicity(src, cone) == 1)
    throw std::invalid_argument("cone " + src.describe(cone) + " is not singular");
  std::optional<BarycentricWaterman> best;
  for (auto face : src.faces_of(cone)) {
    if (src.cone(face).dim < 2) continue;
    for (auto& w : waterman_points(src, face)) {
      if (std::any_of(w.coefficients.begin(), w.coefficients.end(), [](const Rational& a) { return a <= 0; }))
        continue;
      QVector y = f.image(w.point);
      auto t = tgt.carrier(y);
      if (!t || barycenter(tgt, *t) != y) continue;
      if (!best || std::tie(w.coefficients, face) < std::tie(best->waterman.coefficients, best->face))
        best = BarycentricWaterman{face, std::move(w), *t};
    }
  }
  if (!best)
    throw InvariantViolation("singular cone " + src.describe(cone) +
                             " has no Waterman point over a barycenter; relative dimension or setup is out of range");
  return *best;
}

std::vector<MarkedPoint> marked_points(const ComplexMorphism& f) {
  const Complex& src = f.source();
  const Complex& tgt = f.target();
  std::vector<MarkedPoint> out;
  for (std::size_t s = 0; s < src.cone_count(); ++s) {
    if (!src.cone(s).simplicial) throw InvalidInput("source cone " + src.describe(s) + " is not simplicial");
    if (multiplicity(src, s) == 1) continue;
    MarkedPoint mp;
    mp.singular_cone = s;
    mp.waterman = find_barycentric_waterman(f, s);
    auto image = f.image_cone(s);
    if (!image) throw InvalidInput("map is not simplicial on " + src.describe(s));
    const auto& hit = tgt.cone(mp.waterman.target_cone).rays;
    // One ray of the cone over each missing target ray, mapping onto its primitive point.
    std::vector<std::vector<std::size_t>> options;
    for (auto u : tgt.cone(*image).rays) {
      if (std::binary_search(hit.begin(), hit.end(), u)) continue;
      std::vector<std::size_t> over;
      for (auto v : src.cone(s).rays)
        if (f.image(src.ray(v)) == tgt.ray(u)) over.push_back(v);
      if (over.empty())
        throw InvariantViolation("no ray of " + src.describe(s) + " maps onto " + to_string(tgt.ray(u)));
      options.push_back(over);
    }
    // Each option list is sorted; the first entries give the smallest ray ids.
    QVector point = mp.waterman.waterman.point;
    for (const auto& o : options) {
      mp.complement_face.push_back(o.front());
      point = add(point, src.ray(o.front()));
    }
    std::sort(mp.complement_face.begin(), mp.complement_face.end());
    if (f.image(point) != barycenter(tgt, *image))
      throw InvariantViolation("marked point " + to_string(point) + " does not map to the barycenter of " +
                               tgt.describe(*image));
    auto carrier = src.carrier(point);
    if (!carrier) throw InvariantViolation("marked point " + to_string(point) + " lies in no cone");
    mp.point = std::move(point);
    mp.carrier = *carrier;
    out.push_back(std::move(mp));
  }
  return out;
}

std::vector<std::size_t> reduction_order(const ComplexMorphism& f) {
  const Complex& src = f.source();
  std::vector<std::size_t> order(src.cone_count());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto key = [&](std::size_t i) {
    return std::make_tuple(!f.injective_on(i), f.image_dim(i), src.cone(i).dim, src.cone(i).rays);
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  return order;
}

MBSData build_marked_data(const ComplexMorphism& f) {
  const Complex& src = f.source();
  MBSData data;
  data.order = reduction_order(f);
  for (std::size_t i = 0; i < src.cone_count(); ++i)
    if (f.injective_on(i)) data.points[i] = barycenter(src, i);
  std::map<std::size_t, QVector> extra;
  for (auto& mp : marked_points(f)) {
    if (data.points.count(mp.carrier)) continue;
    auto it = extra.find(mp.carrier);
    if (it == extra.end() || mp.point < it->second) extra[mp.carrier] = mp.point;
  }
  for (auto& [cone, point] : extra) data.points[cone] = point;
  return data;
}

InducedMap reduce_step(const ComplexMorphism& f) { return reduce_step(f, build_marked_data(f)); }

InducedMap reduce_step(const ComplexMorphism& f, const MBSData& data) {
  Integer before = max_multiplicity(f.source());
  if (before == 1) throw InvalidInput("source is already nonsingular");
  InducedMap step = induce_simplicial_map(f, data);
  Integer after = max_multiplicity(step.source.result);
  if (after >= before)
    throw InvariantViolation("multiplicity did not drop: " + before.get_str() + " -> " + after.get_str());
  return step;
}

}  // namespace ssr
