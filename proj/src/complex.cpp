#include "ssr/complex.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ssr {

namespace {

std::string ray_list(const std::vector<std::size_t>& rays) {
  std::string s = "{";
  for (std::size_t i = 0; i < rays.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(rays[i]);
  }
  return s + "}";
}

bool subset_of(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

Complex::Complex(std::size_t ambient_dim, std::vector<QVector> rays, const std::vector<ConeSpec>& specs)
    : ambient_dim_(ambient_dim) {
  for (const auto& r : rays)
    if (r.size() != ambient_dim) throw std::invalid_argument("ray " + to_string(r) + " has wrong dimension");
  std::vector<std::size_t> order(rays.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rays[a] < rays[b]; });
  std::vector<std::size_t> new_id(rays.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    new_id[order[i]] = i;
    rays_.push_back(rays[order[i]]);
  }
  for (std::size_t i = 0; i + 1 < rays_.size(); ++i)
    if (rays_[i] == rays_[i + 1]) issues_.push_back("duplicate ray " + to_string(rays_[i]));

  std::map<std::vector<std::size_t>, Cone> found;
  std::set<std::vector<std::size_t>> proper_faces;
  auto gens_of = [&](const std::vector<std::size_t>& ids) {
    std::vector<QVector> g;
    for (auto id : ids) g.push_back(rays_[id]);
    return g;
  };
  auto insert = [&](const std::vector<std::size_t>& ids, const LatticeBasis& lattice, std::size_t dim) {
    auto it = found.find(ids);
    if (it == found.end()) {
      found.emplace(ids, Cone{ids, lattice, dim, dim == ids.size()});
    } else if (!(it->second.lattice == lattice)) {
      issues_.push_back("cone " + ray_list(ids) + " receives different lattices from the cones containing it");
    }
  };

  std::vector<bool> used(rays_.size(), false);
  for (const auto& spec : specs) {
    std::vector<std::size_t> ids;
    for (auto r : spec.rays) {
      if (r >= rays_.size()) throw std::invalid_argument("cone refers to missing ray " + std::to_string(r));
      ids.push_back(new_id[r]);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.empty()) {
      issues_.push_back("cone without rays");
      continue;
    }
    for (auto id : ids) used[id] = true;
    auto gens = gens_of(ids);
    ConeGeometry geom(gens, ambient_dim_);
    LatticeBasis lattice;
    if (spec.lattice) {
      bool inside = true;
      for (const auto& g : gens)
        if (!spec.lattice->in_span(g)) inside = false;
      if (!inside) {
        issues_.push_back("lattice of cone " + ray_list(ids) + " does not span the cone");
        lattice = LatticeBasis::standard(ambient_dim_).restrict_to_span(gens);
      } else {
        lattice = spec.lattice->rank() == geom.dim() ? *spec.lattice : spec.lattice->restrict_to_span(gens);
      }
    } else {
      lattice = LatticeBasis::standard(ambient_dim_).restrict_to_span(gens);
    }
    if (!geom.pointed()) {
      issues_.push_back("cone " + ray_list(ids) + " contains a line");
      insert(ids, lattice, geom.dim());
      continue;
    }
    auto extreme = geom.extreme_generators();
    if (extreme.size() != ids.size()) {
      for (std::size_t i = 0; i < ids.size(); ++i)
        if (!std::binary_search(extreme.begin(), extreme.end(), i))
          issues_.push_back("ray " + std::to_string(ids[i]) + " is not an extreme ray of cone " + ray_list(ids));
    }
    for (const auto& face : geom.faces()) {
      std::vector<std::size_t> fids;
      for (auto j : face) fids.push_back(ids[j]);
      if (fids == ids) {
        insert(ids, lattice, geom.dim());
        continue;
      }
      proper_faces.insert(fids);
      auto fg = gens_of(fids);
      LatticeBasis fl = lattice.restrict_to_span(fg);
      insert(fids, fl, fl.rank());
    }
  }
  for (std::size_t id = 0; id < rays_.size(); ++id) {
    if (used[id]) continue;
    insert({id}, LatticeBasis::standard(ambient_dim_).restrict_to_span({rays_[id]}), 1);
  }

  for (auto& [ids, cone] : found) cones_.push_back(std::move(cone));
  std::stable_sort(cones_.begin(), cones_.end(), [](const Cone& a, const Cone& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.rays < b.rays;
  });
  for (std::size_t i = 0; i < cones_.size(); ++i) {
    index_[cones_[i].rays] = i;
    geometry_.emplace_back(gens_of(cones_[i].rays), ambient_dim_);
    cones_[i].dim = geometry_.back().dim();
    cones_[i].simplicial = geometry_.back().independent();
    if (!proper_faces.count(cones_[i].rays)) maximal_.push_back(i);
  }
}

std::vector<QVector> Complex::generators(std::size_t cone) const {
  std::vector<QVector> g;
  for (auto id : cones_.at(cone).rays) g.push_back(rays_[id]);
  return g;
}

std::optional<std::size_t> Complex::find(const std::vector<std::size_t>& sorted_rays) const {
  auto it = index_.find(sorted_rays);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Complex::find_ray(const QVector& v) const {
  auto it = std::lower_bound(rays_.begin(), rays_.end(), v);
  if (it == rays_.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - rays_.begin());
}

std::optional<std::size_t> Complex::carrier(const QVector& x) const {
  if (x.size() != ambient_dim_) throw std::invalid_argument("point has wrong dimension");
  if (is_zero(x)) return std::nullopt;
  for (std::size_t i = 0; i < cones_.size(); ++i)
    if (geometry_[i].in_relative_interior(x)) return i;
  return std::nullopt;
}

std::vector<std::size_t> Complex::faces_of(std::size_t cone) const {
  std::vector<std::size_t> out;
  const auto& rays = cones_.at(cone).rays;
  for (std::size_t i = 0; i < cones_.size(); ++i)
    if (cones_[i].rays.size() <= rays.size() && subset_of(cones_[i].rays, rays)) out.push_back(i);
  return out;
}

bool Complex::is_face(std::size_t face, std::size_t cone) const {
  return subset_of(cones_.at(face).rays, cones_.at(cone).rays);
}

bool Complex::simplicial() const {
  return std::all_of(cones_.begin(), cones_.end(), [](const Cone& c) { return c.simplicial; });
}

std::size_t Complex::dim() const {
  std::size_t d = 0;
  for (const auto& c : cones_) d = std::max(d, c.dim);
  return d;
}

std::string Complex::describe(std::size_t cone) const {
  std::string s = "<";
  const auto& rays = cones_.at(cone).rays;
  for (std::size_t i = 0; i < rays.size(); ++i) {
    if (i) s += ", ";
    s += to_string(rays_[rays[i]]);
  }
  return s + ">";
}

bool Complex::operator==(const Complex& other) const {
  if (ambient_dim_ != other.ambient_dim_ || rays_ != other.rays_ || cones_.size() != other.cones_.size()) return false;
  for (std::size_t i = 0; i < cones_.size(); ++i)
    if (cones_[i].rays != other.cones_[i].rays || !(cones_[i].lattice == other.cones_[i].lattice)) return false;
  return true;
}

std::size_t ComplexBuilder::add_ray(const QVector& v) {
  if (v.size() != ambient_dim_) throw std::invalid_argument("ray has wrong dimension");
  auto it = ray_ids_.find(v);
  if (it != ray_ids_.end()) return it->second;
  std::size_t id = rays_.size();
  rays_.push_back(v);
  ray_ids_.emplace(v, id);
  return id;
}

void ComplexBuilder::add_cone(const std::vector<QVector>& rays, const LatticeBasis& lattice) {
  ConeSpec spec;
  for (const auto& r : rays) spec.rays.push_back(add_ray(r));
  std::sort(spec.rays.begin(), spec.rays.end());
  spec.lattice = lattice;
  cones_.push_back(std::move(spec));
}

Complex ComplexBuilder::build() const { return Complex(ambient_dim_, rays_, cones_); }

namespace {

// Checks that two cones meet in a common face, peeling off separating facets
// before falling back to vertex enumeration of the intersection.
bool meet_in_common_face(const Complex& c, std::vector<std::size_t> a, std::vector<std::size_t> b) {
  const std::size_t n = c.ambient_dim();
  auto geometry_of = [&](const std::vector<std::size_t>& ids) {
    std::vector<QVector> g;
    for (auto id : ids) g.push_back(c.ray(id));
    return ConeGeometry(g, n);
  };
  for (int guard = 0; guard < 64; ++guard) {
    if (a.empty() || b.empty()) return true;
    if (a == b) return true;
    ConeGeometry ga = geometry_of(a), gb = geometry_of(b);
    bool separated = false;
    for (int side = 0; side < 2 && !separated; ++side) {
      const ConeGeometry& g1 = side == 0 ? ga : gb;
      const std::vector<std::size_t>& ids1 = side == 0 ? a : b;
      const std::vector<std::size_t>& ids2 = side == 0 ? b : a;
      for (const auto& f : g1.facets()) {
        bool below = true;
        for (auto id : ids2)
          if (dot(f.normal, c.ray(id)) > 0) {
            below = false;
            break;
          }
        if (!below) continue;
        std::vector<std::size_t> f1, f2;
        for (auto j : f.generators) f1.push_back(ids1[j]);
        for (auto id : ids2)
          if (dot(f.normal, c.ray(id)) == 0) f2.push_back(id);
        if (side == 0) {
          a = f1;
          b = f2;
        } else {
          b = f1;
          a = f2;
        }
        separated = true;
        break;
      }
    }
    if (separated) continue;
    // General position: compare the intersection's extreme rays with the common rays.
    std::vector<QVector> ineq, eq;
    for (const ConeGeometry* g : {&ga, &gb}) {
      for (const auto& f : g->facets()) ineq.push_back(f.normal);
      QMatrix ann = nullspace(g->span().rows());
      for (std::size_t i = 0; i < ann.rows(); ++i) eq.push_back(ann.row(i));
    }
    auto ext = extreme_rays(ineq, eq, n);
    std::vector<std::size_t> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    std::set<QVector> expected;
    for (auto id : common) expected.insert(primitive_integer_direction(c.ray(id)));
    if (std::set<QVector>(ext.begin(), ext.end()) != expected) return false;
    if (common.empty()) return true;
    auto ca = c.find(a), cb = c.find(b);
    if (!ca || !cb) return false;
    QVector s(n);
    for (auto id : common) s = add(s, c.ray(id));
    auto fa = minimal_face_rays(c, *ca, s);
    auto fb = minimal_face_rays(c, *cb, s);
    return fa == common && fb == common;
  }
  return false;
}

}  // namespace

std::vector<std::size_t> minimal_face_rays(const Complex& c, std::size_t cone, const QVector& x) {
  const auto& g = c.geometry(cone);
  const auto& rays = c.cone(cone).rays;
  std::vector<bool> keep(rays.size(), true);
  for (const auto& f : g.facets()) {
    if (dot(f.normal, x) != 0) continue;
    std::vector<bool> on(rays.size(), false);
    for (auto j : f.generators) on[j] = true;
    for (std::size_t j = 0; j < rays.size(); ++j)
      if (!on[j]) keep[j] = false;
  }
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < rays.size(); ++j)
    if (keep[j]) out.push_back(rays[j]);
  return out;
}

ValidationReport validate_complex(const Complex& c) {
  ValidationReport report;
  report.issues = c.construction_issues();
  for (std::size_t i = 0; i < c.cone_count(); ++i) {
    const Cone& cone = c.cone(i);
    if (cone.lattice.rank() != cone.dim)
      report.issues.push_back("lattice of cone " + c.describe(i) + " has rank " + std::to_string(cone.lattice.rank()) +
                              " but the cone has dimension " + std::to_string(cone.dim));
    for (auto id : cone.rays)
      if (!cone.lattice.contains(c.ray(id)))
        report.issues.push_back("ray " + to_string(c.ray(id)) + " is not a lattice point of cone " + c.describe(i));
    if (cone.dim == 1 && cone.rays.size() == 1 && cone.lattice.contains(c.ray(cone.rays[0]))) {
      QVector p = primitive_vector(c.ray(cone.rays[0]), cone.lattice);
      if (p != c.ray(cone.rays[0]))
        report.issues.push_back("ray " + to_string(c.ray(cone.rays[0])) + " is not primitive (primitive point " +
                                to_string(p) + ")");
    }
  }
  const auto& maximal = c.maximal_cones();
  for (std::size_t x = 0; x < maximal.size(); ++x)
    for (std::size_t y = x + 1; y < maximal.size(); ++y)
      if (!meet_in_common_face(c, c.cone(maximal[x]).rays, c.cone(maximal[y]).rays))
        report.issues.push_back("cones " + c.describe(maximal[x]) + " and " + c.describe(maximal[y]) +
                                " do not meet in a common face");
  return report;
}

Integer multiplicity(const std::vector<QVector>& generators, const LatticeBasis& lattice) {
  if (generators.size() != lattice.rank()) throw std::invalid_argument("multiplicity needs a simplicial cone");
  const std::size_t k = generators.size();
  IntMatrix m(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    auto coords = lattice.coordinates(generators[i]);
    if (!coords || !is_integral(*coords)) throw std::invalid_argument("generator outside the cone lattice");
    for (std::size_t j = 0; j < k; ++j) m(i, j) = (*coords)[j].get_num();
  }
  Integer d = abs_value(determinant(m));
  if (d == 0) throw std::invalid_argument("multiplicity needs a simplicial cone");
  return d;
}

Integer multiplicity(const Complex& c, std::size_t cone) {
  if (!c.cone(cone).simplicial) throw std::invalid_argument("multiplicity of non-simplicial cone " + c.describe(cone));
  return multiplicity(c.generators(cone), c.cone(cone).lattice);
}

Integer max_multiplicity(const Complex& c) {
  Integer m = 1;
  for (auto i : c.maximal_cones()) {
    Integer k = multiplicity(c, i);
    if (k > m) m = k;
  }
  return m;
}

bool is_nonsingular(const Complex& c) {
  for (auto i : c.maximal_cones())
    if (!c.cone(i).simplicial || multiplicity(c, i) != 1) return false;
  return true;
}

std::vector<WatermanPoint> waterman_points(const std::vector<QVector>& generators, const LatticeBasis& lattice) {
  multiplicity(generators, lattice);  // validates simpliciality
  const std::size_t k = generators.size();
  IntMatrix coords(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    auto c = *lattice.coordinates(generators[i]);
    for (std::size_t j = 0; j < k; ++j) coords(i, j) = c[j].get_num();
  }
  // Classes of Z^k modulo the row lattice of coords: x V ranges over a box.
  SmithForm snf = smith_normal_form(coords);
  QMatrix v_inv = inverse(to_rational(snf.v));
  QMatrix coords_inv = inverse(to_rational(coords));
  std::vector<Integer> bounds;
  for (std::size_t i = 0; i < k; ++i) bounds.push_back(snf.s(i, i));
  std::vector<WatermanPoint> out;
  std::vector<Integer> y(k, 0);
  while (true) {
    QVector yq(y.begin(), y.end());
    QVector x = vec_mat(yq, v_inv);
    QVector alpha = vec_mat(x, coords_inv);
    for (auto& a : alpha) {
      Integer fl;
      mpz_fdiv_q(fl.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
      a -= Rational(fl);
    }
    QVector point(lattice.ambient_dim());
    for (std::size_t i = 0; i < k; ++i) point = add(point, scale(generators[i], alpha[i]));
    out.push_back({std::move(alpha), std::move(point)});
    std::size_t pos = 0;
    while (pos < k) {
      ++y[pos];
      if (y[pos] < bounds[pos]) break;
      y[pos] = 0;
      ++pos;
    }
    if (pos == k) break;
  }
  std::sort(out.begin(), out.end(), [](const WatermanPoint& a, const WatermanPoint& b) {
    return a.coefficients < b.coefficients;
  });
  return out;
}

std::vector<WatermanPoint> waterman_points(const Complex& c, std::size_t cone) {
  if (!c.cone(cone).simplicial) throw std::invalid_argument("Waterman points of non-simplicial cone " + c.describe(cone));
  return waterman_points(c.generators(cone), c.cone(cone).lattice);
}

QVector barycenter(const Complex& c, std::size_t cone) {
  QVector s(c.ambient_dim());
  for (auto id : c.cone(cone).rays) s = add(s, c.ray(id));
  return s;
}

}  // namespace ssr
