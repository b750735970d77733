#include "ssr/subdivision.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace ssr {

namespace {

std::vector<Rational> values_on(const Complex& c, std::size_t cone, const std::vector<Rational>& values) {
  std::vector<Rational> out;
  for (auto id : c.cone(cone).rays) out.push_back(values.at(id));
  return out;
}

// Functional positive on the cone minus the origin.
QVector interior_functional(const ConeGeometry& g) {
  QVector h(g.ambient_dim());
  for (const auto& f : g.facets()) h = add(h, f.normal);
  return h;
}

// Volume of the slice {h = 1} of the cone spanned by `simplex`, in the
// coordinates of the span of `frame`.
Rational slice_volume(const ConeGeometry& frame, const QVector& h, const std::vector<QVector>& simplex) {
  const std::size_t d = frame.dim();
  QMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    auto coords = frame.span().coordinates(simplex[i]);
    if (!coords) throw std::invalid_argument("cell outside the span of its base cone");
    Rational height = dot(h, simplex[i]);
    for (std::size_t j = 0; j < d; ++j) m(i, j) = (*coords)[j] / height;
  }
  Rational v = determinant(m);
  return v < 0 ? Rational(-v) : v;
}

Rational cell_volume(const ConeGeometry& frame, const QVector& h, const ConeGeometry& cell) {
  std::vector<std::size_t> rank(cell.generators().size());
  std::iota(rank.begin(), rank.end(), 0);
  Rational total = 0;
  for (const auto& simplex : cell.pulling_triangulation(rank)) {
    std::vector<QVector> gens;
    for (auto i : simplex) gens.push_back(cell.generators()[i]);
    total += slice_volume(frame, h, gens);
  }
  return total;
}

std::vector<std::size_t> positions(const Complex& c, const std::vector<std::size_t>& order) {
  std::vector<std::size_t> pos(c.cone_count(), c.cone_count());
  for (std::size_t i = 0; i < order.size(); ++i)
    if (order[i] < c.cone_count()) pos[order[i]] = i;
  return pos;
}

QVector transpose_apply(const IntMatrix& m, const QVector& c) {
  QVector out(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += c[i] * Rational(m(i, j));
  return out;
}

Complex cut_once(const Complex& c, const QVector& normal) {
  ComplexBuilder builder(c.ambient_dim());
  for (auto s : c.maximal_cones()) {
    const Cone& cone = c.cone(s);
    bool pos = false, neg = false;
    for (auto id : cone.rays) {
      Rational v = dot(normal, c.ray(id));
      if (v > 0) pos = true;
      if (v < 0) neg = true;
    }
    if (!(pos && neg)) {
      builder.add_cone(c.generators(s), cone.lattice);
      continue;
    }
    std::vector<QVector> upper, lower;
    for (auto id : cone.rays) {
      Rational v = dot(normal, c.ray(id));
      if (v >= 0) upper.push_back(c.ray(id));
      if (v <= 0) lower.push_back(c.ray(id));
    }
    for (auto e : c.faces_of(s)) {
      if (c.cone(e).dim != 2 || c.cone(e).rays.size() != 2) continue;
      const QVector& a = c.ray(c.cone(e).rays[0]);
      const QVector& b = c.ray(c.cone(e).rays[1]);
      Rational va = dot(normal, a), vb = dot(normal, b);
      if (!((va > 0 && vb < 0) || (va < 0 && vb > 0))) continue;
      QVector p = subtract(scale(b, va), scale(a, vb));
      if (va < 0) p = scale(p, -1);
      p = primitive_vector(p, cone.lattice);
      upper.push_back(p);
      lower.push_back(p);
    }
    builder.add_cone(upper, cone.lattice);
    builder.add_cone(lower, cone.lattice);
  }
  return builder.build();
}

}  // namespace

Subdivision trivial_subdivision(const Complex& c) {
  return {c, c, GoodFunction{std::vector<Rational>(c.rays().size(), Rational(0))}};
}

std::optional<QVector> linear_piece(const Complex& c, std::size_t cone, const std::vector<Rational>& values) {
  return c.geometry(cone).linear_functional(values_on(c, cone, values));
}

Rational evaluate(const Complex& c, const GoodFunction& psi, const QVector& x) {
  if (is_zero(x)) return 0;
  auto carrier = c.carrier(x);
  if (!carrier) throw InvalidInput("point " + to_string(x) + " lies outside the complex");
  auto a = linear_piece(c, *carrier, psi.values);
  if (!a) throw InvalidInput("function is not linear on cone " + c.describe(*carrier));
  return dot(*a, x);
}

std::vector<Wall> interior_walls(const Complex& sub, const Complex& base) {
  std::map<std::vector<std::size_t>, std::vector<std::size_t>> by_facet;
  for (auto m : sub.maximal_cones()) {
    const auto& rays = sub.cone(m).rays;
    for (const auto& f : sub.geometry(m).facets()) {
      if (f.generators.empty()) continue;
      std::vector<std::size_t> ids;
      for (auto j : f.generators) ids.push_back(rays[j]);
      by_facet[ids].push_back(m);
    }
  }
  std::vector<Wall> walls;
  for (const auto& [ids, cones] : by_facet) {
    if (cones.size() < 2) continue;
    auto wall = sub.find(ids);
    if (!wall) continue;
    QVector inner(sub.ambient_dim());
    for (auto id : ids) inner = add(inner, sub.ray(id));
    auto carrier = base.carrier(inner);
    for (std::size_t i = 0; i < cones.size(); ++i)
      for (std::size_t j = i + 1; j < cones.size(); ++j) {
        std::size_t d = sub.cone(cones[i]).dim;
        if (sub.cone(cones[j]).dim != d) continue;
        std::vector<QVector> both = sub.generators(cones[i]);
        for (const auto& g : sub.generators(cones[j])) both.push_back(g);
        if (rank_of(both, sub.ambient_dim()) != d) continue;
        if (!carrier || base.cone(*carrier).dim != d) continue;
        walls.push_back({cones[i], cones[j], *wall});
      }
  }
  return walls;
}

Rational wall_bend(const Complex& sub, const Wall& w, const std::vector<Rational>& values) {
  auto a = linear_piece(sub, w.left, values);
  if (!a) throw InvalidInput("function is not linear on cone " + sub.describe(w.left));
  const auto& wall_rays = sub.cone(w.wall).rays;
  std::optional<Rational> bend;
  for (auto q : sub.cone(w.right).rays) {
    if (std::binary_search(wall_rays.begin(), wall_rays.end(), q)) continue;
    Rational b = values.at(q) - dot(*a, sub.ray(q));
    if (!bend || b < *bend) bend = b;
  }
  return bend.value_or(Rational(0));
}

ValidationReport check_refinement(const Complex& sub, const Complex& base) {
  ValidationReport report;
  if (sub.ambient_dim() != base.ambient_dim()) {
    report.issues.push_back("subdivision and base live in different dimensions");
    return report;
  }
  std::set<std::size_t> base_maximal(base.maximal_cones().begin(), base.maximal_cones().end());
  std::map<std::size_t, Rational> covered;
  for (auto m : sub.maximal_cones()) {
    auto carrier = base.carrier(barycenter(sub, m));
    if (!carrier) {
      report.issues.push_back("cell " + sub.describe(m) + " is not inside the base");
      continue;
    }
    bool inside = true;
    for (const auto& g : sub.generators(m))
      if (!base.geometry(*carrier).contains(g)) inside = false;
    if (!inside) {
      report.issues.push_back("cell " + sub.describe(m) + " is not inside one base cone");
      continue;
    }
    if (sub.cone(m).dim != base.cone(*carrier).dim || !base_maximal.count(*carrier)) {
      report.issues.push_back("cell " + sub.describe(m) + " does not fill a maximal base cone");
      continue;
    }
    const ConeGeometry& frame = base.geometry(*carrier);
    covered[*carrier] += cell_volume(frame, interior_functional(frame), sub.geometry(m));
  }
  for (auto b : base.maximal_cones()) {
    const ConeGeometry& frame = base.geometry(b);
    Rational whole = cell_volume(frame, interior_functional(frame), frame);
    if (covered[b] != whole)
      report.issues.push_back("support mismatch in base cone " + base.describe(b) + ": covered " +
                              covered[b].get_str() + " of " + whole.get_str());
  }
  return report;
}

ProjectivityReport verify_projectivity(const Complex& sub, const Complex& base, const GoodFunction& cert) {
  ProjectivityReport report;
  if (cert.values.size() != sub.rays().size()) {
    report.issues.push_back("certificate has " + std::to_string(cert.values.size()) + " values for " +
                            std::to_string(sub.rays().size()) + " rays");
    return report;
  }
  for (auto& issue : check_refinement(sub, base).issues) report.issues.push_back(std::move(issue));
  if (!report.ok()) return report;
  bool linear = true;
  for (auto m : sub.maximal_cones())
    if (!linear_piece(sub, m, cert.values)) {
      report.issues.push_back("certificate is not linear on cone " + sub.describe(m));
      linear = false;
    }
  if (!linear) return report;
  for (const auto& w : interior_walls(sub, base)) {
    Rational bend = wall_bend(sub, w, cert.values);
    if (bend <= 0)
      report.issues.push_back("certificate " + std::string(bend == 0 ? "is linear" : "is concave") +
                              " across the wall " + sub.describe(w.wall) + " between " + sub.describe(w.left) +
                              " and " + sub.describe(w.right));
  }
  return report;
}

Subdivision compose(const Subdivision& first, const Subdivision& second) {
  if (!(first.result == second.base)) throw std::invalid_argument("subdivisions do not chain");
  const Complex& fine = second.result;
  std::vector<Rational> old_values;
  for (const auto& r : fine.rays()) old_values.push_back(evaluate(first.result, first.certificate, r));
  Integer k = 1;
  for (const auto& w : interior_walls(fine, first.base)) {
    Rational d_old = wall_bend(fine, w, old_values);
    Rational d_new = wall_bend(fine, w, second.certificate.values);
    if (d_old < 0) throw InvariantViolation("accumulated certificate is concave across " + fine.describe(w.wall));
    if (d_old == 0) {
      if (d_new <= 0) throw InvariantViolation("certificates are both flat across " + fine.describe(w.wall));
      continue;
    }
    Rational ratio = -d_new / d_old;
    if (ratio >= Rational(k)) {
      Integer fl;
      mpz_fdiv_q(fl.get_mpz_t(), ratio.get_num_mpz_t(), ratio.get_den_mpz_t());
      k = fl + 1;
    }
  }
  GoodFunction combined;
  for (std::size_t i = 0; i < old_values.size(); ++i)
    combined.values.push_back(Rational(k) * old_values[i] + second.certificate.values[i]);
  return {first.base, fine, std::move(combined)};
}

Subdivision star_subdivide(const Complex& c, const QVector& point) {
  if (point.size() != c.ambient_dim()) throw InvalidInput("star point has wrong dimension");
  if (is_zero(point)) throw InvalidInput("cannot star at the origin");
  auto rho = c.carrier(point);
  if (!rho) throw InvalidInput("star point " + to_string(point) + " lies in no cone");
  const Cone& carrier = c.cone(*rho);
  if (!carrier.lattice.contains(point))
    throw InvalidInput("star point " + to_string(point) + " is not a lattice point of " + c.describe(*rho));
  if (carrier.dim == 1) return trivial_subdivision(c);
  QVector p = primitive_vector(point, carrier.lattice);
  ComplexBuilder builder(c.ambient_dim());
  for (auto s : c.maximal_cones()) {
    const Cone& cone = c.cone(s);
    if (!c.is_face(*rho, s)) {
      builder.add_cone(c.generators(s), cone.lattice);
      continue;
    }
    for (const auto& f : c.geometry(s).facets()) {
      std::vector<std::size_t> ids;
      for (auto j : f.generators) ids.push_back(cone.rays[j]);
      if (std::includes(ids.begin(), ids.end(), carrier.rays.begin(), carrier.rays.end())) continue;
      std::vector<QVector> gens{p};
      for (auto id : ids) gens.push_back(c.ray(id));
      builder.add_cone(gens, cone.lattice);
    }
  }
  Complex result = builder.build();
  GoodFunction dip{std::vector<Rational>(result.rays().size(), Rational(0))};
  dip.values[*result.find_ray(p)] = -1;
  return {c, std::move(result), std::move(dip)};
}

Subdivision star_subdivide(const Subdivision& current, const QVector& point) {
  return compose(current, star_subdivide(current.result, point));
}

namespace {

using IntVector = std::vector<Integer>;

// Lattice coordinates in a base cone, scaled by a positive integer; containment
// tests only look at signs.
std::optional<IntVector> scaled_coordinates(const LatticeBasis& lattice, const QVector& x) {
  auto y = lattice.coordinates(x);
  if (!y) return std::nullopt;
  Integer den = lcm_of_denominators(*y);
  IntVector out;
  for (const auto& v : *y) out.emplace_back(v * den);
  return out;
}

struct SequenceCell {
  std::vector<std::size_t> rays;  // ids into the sequence's ray list, in row order
  std::size_t base;               // maximal cone of the starting complex
  IntMatrix adjugate;             // det times the inverse of the ray coordinate rows
  Integer det;
};

// x * adjugate, the coefficients of x in the cell's rays times det.
IntVector weighted_coefficients(const SequenceCell& cell, const IntVector& x) {
  IntVector out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    for (std::size_t i = 0; i < x.size(); ++i) out[j] += x[i] * cell.adjugate(i, j);
  return out;
}

bool cell_contains(const SequenceCell& cell, const IntVector& x) {
  int s = sgn(cell.det);
  for (const auto& v : weighted_coefficients(cell, x))
    if (sgn(v) * s < 0) return false;
  return true;
}

}  // namespace

StarCells star_cells(const Complex& c, const std::vector<QVector>& points) {
  if (!c.simplicial()) throw InvalidInput("star sequences need a simplicial complex");
  std::vector<QVector> rays = c.rays();
  std::set<QVector> known(rays.begin(), rays.end());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != c.ambient_dim()) throw InvalidInput("star point has wrong dimension");
    if (is_zero(points[i])) throw InvalidInput("cannot star at the origin");
  }
  // Coordinates of points and rays in each base cone's lattice, filled on demand.
  std::map<std::size_t, std::vector<std::optional<std::optional<IntVector>>>> point_coords, ray_coords;
  auto coords_of = [&](auto& cache, std::size_t base, std::size_t i, const QVector& x) -> const std::optional<IntVector>& {
    auto& slot = cache[base];
    if (slot.size() <= i) slot.resize(i + 1);
    if (!slot[i]) slot[i] = scaled_coordinates(c.cone(base).lattice, x);
    return *slot[i];
  };
  auto initial_cell = [&](std::vector<std::size_t> ids, std::size_t base) {
    const std::size_t k = ids.size();
    IntMatrix g(k, k);
    QMatrix gq(k, k);
    for (std::size_t i = 0; i < k; ++i) {
      const auto& y = coords_of(ray_coords, base, ids[i], rays[ids[i]]);
      if (!y) throw InvariantViolation("star ray leaves its base cone");
      for (std::size_t j = 0; j < k; ++j) {
        g(i, j) = (*y)[j];
        gq(i, j) = (*y)[j];
      }
    }
    SequenceCell cell{std::move(ids), base, IntMatrix(k, k), determinant(g)};
    QMatrix inv = inverse(gq);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) cell.adjugate(i, j) = Integer(inv(i, j) * cell.det);
    return cell;
  };
  // Row `row` of the parent replaced by `ray`, with a = the ray's weighted
  // coefficients in the parent: the new determinant is a[row] and the adjugate
  // follows from a rank-one update, exactly divisible by the old determinant.
  auto child_of = [](const SequenceCell& parent, std::size_t row, std::size_t ray, const IntVector& a) {
    const std::size_t k = parent.rays.size();
    SequenceCell cell{parent.rays, parent.base, IntMatrix(k, k), a[row]};
    cell.rays[row] = ray;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        Integer shift = j == row ? Integer(a[j] - parent.det) : a[j];
        Integer v = a[row] * parent.adjugate(i, j) - parent.adjugate(i, row) * shift;
        mpz_divexact(cell.adjugate(i, j).get_mpz_t(), v.get_mpz_t(), parent.det.get_mpz_t());
      }
    return cell;
  };
  // Each live cell lists the later points it contains; a split hands them to the children.
  std::vector<SequenceCell> cells;
  std::vector<bool> alive;
  std::vector<std::vector<std::size_t>> pending;
  std::vector<std::vector<std::size_t>> cells_of_point(points.size());
  auto add_cell = [&](SequenceCell cell, const std::vector<std::size_t>& candidates) {
    std::size_t id = cells.size();
    cells.push_back(std::move(cell));
    alive.push_back(true);
    pending.emplace_back();
    for (auto q : candidates) {
      const auto& y = coords_of(point_coords, cells[id].base, q, points[q]);
      if (y && cell_contains(cells[id], *y)) {
        pending[id].push_back(q);
        cells_of_point[q].push_back(id);
      }
    }
  };
  std::vector<std::size_t> all(points.size());
  std::iota(all.begin(), all.end(), 0);
  for (auto s : c.maximal_cones()) add_cell(initial_cell(c.cone(s).rays, s), all);

  StarCells out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const QVector& point = points[i];
    std::vector<std::size_t> hits;
    for (auto k : cells_of_point[i])
      if (alive[k]) hits.push_back(k);
    if (hits.empty()) throw InvalidInput("star point " + to_string(point) + " lies in no cone");
    const SequenceCell& first = cells[hits.front()];
    const LatticeBasis& lattice = c.cone(first.base).lattice;
    if (!lattice.contains(point))
      throw InvalidInput("star point " + to_string(point) + " is not a lattice point of " + c.describe(first.base));
    QVector prim = primitive_vector(point, lattice);
    IntVector a = weighted_coefficients(first, *scaled_coordinates(lattice, prim));
    std::vector<std::size_t> carrier;
    std::vector<std::pair<std::size_t, Rational>> combination;
    for (std::size_t j = 0; j < a.size(); ++j)
      if (a[j] != 0) {
        carrier.push_back(first.rays[j]);
        combination.emplace_back(first.rays[j], Rational(a[j]) / Rational(first.det));
      }
    if (carrier.size() == 1) continue;
    if (!known.insert(prim).second) throw InvariantViolation("star point " + to_string(point) + " is already a ray");
    std::size_t id = rays.size();
    rays.push_back(prim);
    out.steps.push_back({id, combination});
    out.starred.push_back(point);
    for (auto k : hits) {
      alive[k] = false;
      std::vector<std::size_t> later;
      for (auto q : pending[k])
        if (q > i) later.push_back(q);
      pending[k].clear();
      SequenceCell parent = cells[k];
      const auto& y = coords_of(ray_coords, parent.base, id, prim);
      if (!y) throw InvariantViolation("star ray leaves its base cone");
      IntVector weights = weighted_coefficients(parent, *y);
      for (std::size_t row = 0; row < parent.rays.size(); ++row)
        if (weights[row] != 0) add_cell(child_of(parent, row, id, weights), later);
    }
  }

  for (std::size_t k = 0; k < cells.size(); ++k)
    if (alive[k]) {
      std::sort(cells[k].rays.begin(), cells[k].rays.end());
      out.cells.push_back({std::move(cells[k].rays), cells[k].base});
    }
  out.rays = std::move(rays);
  return out;
}

StarSequence star_sequence(const Complex& c, const std::vector<QVector>& points) {
  StarCells cells = star_cells(c, points);
  ComplexBuilder builder(c.ambient_dim());
  for (const auto& cell : cells.cells) {
    std::vector<QVector> gens;
    for (auto r : cell.rays) gens.push_back(cells.rays[r]);
    builder.add_cone(gens, c.cone(cell.base).lattice);
  }
  Complex result = builder.build();
  GoodFunction cert;
  Integer m = 2;
  for (int attempt = 0;; ++attempt, m *= 2) {
    std::vector<Rational> height(cells.rays.size(), Rational(0));
    Rational depth = 1;
    for (const auto& step : cells.steps) {
      depth /= Rational(m);
      Rational h = -depth;
      for (const auto& [r, a] : step.combination) h += a * height[r];
      height[step.ray] = h;
    }
    cert.values.assign(result.rays().size(), Rational(0));
    for (std::size_t i = 0; i < cells.rays.size(); ++i)
      if (auto rid = result.find_ray(cells.rays[i])) cert.values[*rid] = height[i];
    if (verify_projectivity(result, c, cert).ok()) break;
    if (attempt == 48) throw InvariantViolation("no certificate found for the star sequence");
  }
  return {{c, std::move(result), std::move(cert)}, std::move(cells.starred)};
}

std::vector<std::size_t> default_order(const Complex& c) {
  std::vector<std::size_t> order(c.cone_count());
  std::iota(order.begin(), order.end(), 0);
  return order;
}

bool refines_face_order(const Complex& c, const std::vector<std::size_t>& order) {
  if (order.size() != c.cone_count()) return false;
  auto pos = positions(c, order);
  for (auto p : pos)
    if (p == c.cone_count()) return false;
  for (std::size_t i = 0; i < c.cone_count(); ++i)
    for (std::size_t j = 0; j < c.cone_count(); ++j)
      if (i != j && c.is_face(i, j) && pos[i] > pos[j]) return false;
  return true;
}

MBSData augment_rays(const Complex& c, MBSData data) {
  for (std::size_t i = 0; i < c.cone_count(); ++i)
    if (c.cone(i).dim == 1 && !data.points.count(i)) data.points[i] = c.ray(c.cone(i).rays[0]);
  return data;
}

ValidationReport validate_mbs_data(const Complex& c, const MBSData& data) {
  ValidationReport report;
  if (!c.simplicial()) report.issues.push_back("complex is not simplicial");
  if (!refines_face_order(c, data.order)) report.issues.push_back("order does not refine the face order");
  for (const auto& [cone, point] : data.points) {
    if (cone >= c.cone_count()) {
      report.issues.push_back("marked cone index " + std::to_string(cone) + " out of range");
      continue;
    }
    if (!c.geometry(cone).in_relative_interior(point))
      report.issues.push_back("marked point " + to_string(point) + " is not interior to " + c.describe(cone));
    else if (!c.cone(cone).lattice.contains(point))
      report.issues.push_back("marked point " + to_string(point) + " is not a lattice point of " + c.describe(cone));
  }
  return report;
}

Subdivision mbs_subdivide(const Complex& c, const MBSData& input) {
  MBSData data = augment_rays(c, input);
  auto report = validate_mbs_data(c, data);
  if (!report.ok()) throw ValidationError("invalid marked data: " + report.issues.front(), report.issues);
  auto pos = positions(c, data.order);
  std::vector<std::size_t> marked;
  for (const auto& [cone, point] : data.points) marked.push_back(cone);
  std::sort(marked.begin(), marked.end(), [&](std::size_t a, std::size_t b) { return pos[a] > pos[b]; });
  Subdivision current = trivial_subdivision(c);
  for (auto cone : marked) {
    if (c.cone(cone).dim == 1) continue;
    current = star_subdivide(current, data.points.at(cone));
  }
  Complex chains = chain_complex(c, data);
  if (!(chains == current.result))
    throw InvariantViolation("chain complex differs from the star-sequence subdivision");
  return current;
}

Subdivision barycentric_subdivide(const Complex& c, const std::vector<std::size_t>& order) {
  if (!c.simplicial()) throw InvalidInput("barycentric subdivision needs a simplicial complex");
  if (!refines_face_order(c, order)) throw InvalidInput("order does not refine the face order");
  MBSData data;
  data.order = order;
  for (std::size_t i = 0; i < c.cone_count(); ++i) data.points[i] = barycenter(c, i);
  return mbs_subdivide(c, data);
}

Complex chain_complex(const Complex& c, const MBSData& input) {
  MBSData data = augment_rays(c, input);
  auto pos = positions(c, data.order);
  std::vector<std::optional<std::size_t>> last_marked(c.cone_count());
  for (std::size_t i = 0; i < c.cone_count(); ++i)
    for (auto f : c.faces_of(i))
      if (data.points.count(f) && (!last_marked[i] || pos[f] > pos[*last_marked[i]])) last_marked[i] = f;
  ComplexBuilder builder(c.ambient_dim());
  for (auto s : c.maximal_cones()) {
    const Cone& top = c.cone(s);
    std::vector<std::size_t> perm = top.rays;
    std::set<std::vector<QVector>> seen;
    do {
      std::vector<QVector> gens;
      std::vector<std::size_t> prefix;
      for (auto id : perm) {
        prefix.push_back(id);
        std::vector<std::size_t> sorted = prefix;
        std::sort(sorted.begin(), sorted.end());
        auto cone = c.find(sorted);
        if (!cone || !last_marked[*cone]) throw InvariantViolation("chain through a cone without marked faces");
        QVector p = primitive_vector(data.points.at(*last_marked[*cone]), top.lattice);
        if (std::find(gens.begin(), gens.end(), p) == gens.end()) gens.push_back(p);
      }
      std::sort(gens.begin(), gens.end());
      if (!seen.insert(gens).second) continue;
      if (rank_of(gens, c.ambient_dim()) != gens.size())
        throw InvariantViolation("chain in " + c.describe(s) + " yields dependent generators");
      builder.add_cone(gens, top.lattice);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return builder.build();
}

Subdivision triangulate_pulling(const Complex& c, const std::vector<std::size_t>& ray_order) {
  const std::size_t n = c.rays().size();
  std::vector<std::size_t> rank(n, n);
  for (std::size_t i = 0; i < ray_order.size(); ++i)
    if (ray_order[i] < n) rank[ray_order[i]] = i;
  for (auto r : rank)
    if (r == n) throw InvalidInput("ray order is not a permutation of the rays");
  ComplexBuilder builder(c.ambient_dim());
  bool changed = false;
  for (auto s : c.maximal_cones()) {
    const Cone& cone = c.cone(s);
    if (cone.simplicial) {
      builder.add_cone(c.generators(s), cone.lattice);
      continue;
    }
    changed = true;
    std::vector<std::size_t> local_rank;
    for (auto id : cone.rays) local_rank.push_back(rank[id]);
    for (const auto& simplex : c.geometry(s).pulling_triangulation(local_rank)) {
      std::vector<QVector> gens;
      for (auto j : simplex) gens.push_back(c.ray(cone.rays[j]));
      builder.add_cone(gens, cone.lattice);
    }
  }
  if (!changed) return trivial_subdivision(c);
  Complex result = builder.build();
  // Heights -M^(n - rank) realize the pulling order once M is large enough.
  std::vector<std::size_t> result_rank;
  for (const auto& r : result.rays()) result_rank.push_back(rank[*c.find_ray(r)]);
  Integer m = 2;
  for (int attempt = 0; attempt < 48; ++attempt, m *= 2) {
    GoodFunction cert;
    for (auto r : result_rank) {
      Integer h;
      mpz_pow_ui(h.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(n - r));
      cert.values.push_back(Rational(-h));
    }
    if (verify_projectivity(result, c, cert).ok()) return {c, std::move(result), std::move(cert)};
  }
  throw InvariantViolation("no height function found for the pulling triangulation");
}

Subdivision cut_by_hyperplanes(const Complex& c, const std::vector<QVector>& normals) {
  Complex current = c;
  for (const auto& n : normals) current = cut_once(current, n);
  GoodFunction cert;
  for (const auto& r : current.rays()) {
    Rational v = 0;
    for (const auto& n : normals) {
      Rational x = dot(n, r);
      v += x < 0 ? Rational(-x) : x;
    }
    cert.values.push_back(v);
  }
  return {c, std::move(current), std::move(cert)};
}

Complex pullback_refine(const ComplexMorphism& f, const Complex& target_sub) {
  const Complex& src = f.source();
  const Complex& tgt = f.target();
  const IntMatrix& map = f.map();
  ComplexBuilder builder(src.ambient_dim());
  for (auto s : src.maximal_cones()) {
    const Cone& cone = src.cone(s);
    const ConeGeometry& geom = src.geometry(s);
    auto carrier = f.target_carrier(s);
    if (!carrier) throw InvalidInput("source cone " + src.describe(s) + " maps into no target cone");
    const QMatrix& span = geom.span().rows();
    const std::size_t d = geom.dim();
    std::vector<QVector> own;
    for (const auto& fct : geom.facets()) own.push_back(mat_vec(span, fct.normal));
    std::vector<std::vector<QVector>> cells;
    for (auto t : target_sub.maximal_cones()) {
      bool meets = false;
      for (const auto& g : target_sub.generators(t))
        if (tgt.geometry(*carrier).contains(g)) meets = true;
      if (!meets) continue;
      const ConeGeometry& tg = target_sub.geometry(t);
      std::vector<QVector> ineq = own, eq;
      for (const auto& fct : tg.facets()) ineq.push_back(mat_vec(span, transpose_apply(map, fct.normal)));
      QMatrix ann = nullspace(tg.span().rows());
      for (std::size_t i = 0; i < ann.rows(); ++i) eq.push_back(mat_vec(span, transpose_apply(map, ann.row(i))));
      std::vector<QVector> rays;
      for (const auto& y : extreme_rays(ineq, eq, d)) rays.push_back(primitive_vector(vec_mat(y, span), cone.lattice));
      if (rays.empty()) continue;
      std::sort(rays.begin(), rays.end());
      cells.push_back(std::move(rays));
    }
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < cells.size() && !dominated; ++j)
        if (i != j && cells[i].size() < cells[j].size() &&
            std::includes(cells[j].begin(), cells[j].end(), cells[i].begin(), cells[i].end()))
          dominated = true;
      if (!dominated) builder.add_cone(cells[i], cone.lattice);
    }
  }
  return builder.build();
}

Subdivision pullback_refine(const ComplexMorphism& f, const Subdivision& target_sub) {
  Complex result = pullback_refine(f, target_sub.result);
  GoodFunction cert;
  for (const auto& r : result.rays()) cert.values.push_back(evaluate(target_sub.result, target_sub.certificate, f.image(r)));
  return {f.source(), std::move(result), std::move(cert)};
}

InducedMap induce_simplicial_map(const ComplexMorphism& f, const MBSData& input) {
  const Complex& src = f.source();
  const Complex& tgt = f.target();
  MBSData data = augment_rays(src, input);
  auto report = validate_mbs_data(src, data);
  if (!report.ok()) throw ValidationError("invalid marked data: " + report.issues.front(), report.issues);
  for (const auto& [cone, point] : data.points) {
    QVector y = f.image(point);
    if (is_zero(y)) continue;
    auto t = tgt.carrier(y);
    if (!t || primitive_integer_direction(barycenter(tgt, *t)) != primitive_integer_direction(y))
      throw HypothesisViolation("image of marked point " + to_string(point) + " is not on a barycentric ray", cone);
  }
  auto pos = positions(src, data.order);
  for (std::size_t s = 0; s < src.cone_count(); ++s) {
    std::optional<std::size_t> last;
    for (auto face : src.faces_of(s))
      if (data.points.count(face) && (!last || pos[face] > pos[*last])) last = face;
    auto whole = f.image_cone(s);
    auto part = f.image_cone(*last);
    if (!whole || !part) throw InvalidInput("map is not simplicial on " + src.describe(s));
    if (*whole != *part)
      throw HypothesisViolation("the last marked face " + src.describe(*last) + " of " + src.describe(s) +
                                    " has a smaller image",
                                s);
  }
  Subdivision source = mbs_subdivide(src, data);
  Subdivision target = barycentric_subdivide(tgt, default_order(tgt));
  ComplexMorphism induced(source.result, target.result, f.map());
  for (std::size_t s = 0; s < induced.source().cone_count(); ++s)
    if (!induced.image_cone(s))
      throw InvariantViolation("cone " + induced.source().describe(s) + " does not map onto a barycentric cone");
  return {std::move(induced), std::move(source), std::move(target)};
}

ComplexMorphism induced_simplicial_map(const ComplexMorphism& f, const MBSData& data) {
  return induce_simplicial_map(f, data).morphism;
}

}  // namespace ssr
