#include "ssr/cone.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace ssr {

namespace {

// Pairings of the span basis with each generator: the coordinates in which a
// functional a = lambda * span evaluates as lambda . h.
std::vector<QVector> span_pairings(const EchelonBasis& span, const std::vector<QVector>& gens) {
  std::vector<QVector> h;
  for (const auto& g : gens) h.push_back(mat_vec(span.rows(), g));
  return h;
}

}  // namespace

ConeGeometry::ConeGeometry(std::vector<QVector> generators, std::size_t ambient_dim)
    : generators_(std::move(generators)) {
  for (const auto& g : generators_)
    if (g.size() != ambient_dim) throw std::invalid_argument("cone generator has wrong dimension");
  span_ = EchelonBasis::span_of(generators_, ambient_dim);
  const std::size_t d = dim();
  const std::size_t m = generators_.size();
  if (d == 0) return;
  if (independent()) {
    QMatrix g = QMatrix::from_rows(generators_, ambient_dim);
    QMatrix dual = inverse(g * g.transpose()) * g;
    for (std::size_t i = 0; i < m; ++i) {
      Facet f{dual.row(i), {}};
      for (std::size_t j = 0; j < m; ++j)
        if (j != i) f.generators.push_back(j);
      facets_.push_back(std::move(f));
    }
    return;
  }
  auto h = span_pairings(span_, generators_);
  std::set<std::vector<std::size_t>> seen;
  for_each_subset(m, d - 1, [&](const std::vector<std::size_t>& subset) {
    QMatrix rows(subset.size(), d);
    for (std::size_t r = 0; r < subset.size(); ++r)
      for (std::size_t c = 0; c < d; ++c) rows(r, c) = h[subset[r]][c];
    QMatrix ns = nullspace(rows);
    if (ns.rows() != 1) return;
    QVector lambda = ns.row(0);
    bool pos = false, neg = false;
    std::vector<std::size_t> zero_set;
    for (std::size_t i = 0; i < m; ++i) {
      Rational v = dot(lambda, h[i]);
      if (v > 0) pos = true;
      if (v < 0) neg = true;
      if (v == 0) zero_set.push_back(i);
    }
    if (pos && neg) return;
    if (!pos && !neg) return;
    if (!seen.insert(zero_set).second) return;
    if (neg) lambda = scale(lambda, -1);
    facets_.push_back({vec_mat(lambda, span_.rows()), std::move(zero_set)});
  });
}

bool ConeGeometry::contains(const QVector& x) const {
  if (dim() == 0) return is_zero(x);
  if (!span_.contains(x)) return false;
  for (const auto& f : facets_)
    if (dot(f.normal, x) < 0) return false;
  return true;
}

bool ConeGeometry::in_relative_interior(const QVector& x) const {
  if (dim() == 0 || facets_.empty()) return false;
  if (!span_.contains(x)) return false;
  for (const auto& f : facets_)
    if (dot(f.normal, x) <= 0) return false;
  return true;
}

bool ConeGeometry::pointed() const {
  for (const auto& g : generators_)
    if (is_zero(g)) return false;
  if (dim() == 0) return true;
  std::vector<QVector> normals;
  for (const auto& f : facets_) normals.push_back(f.normal);
  return rank_of(normals, ambient_dim()) == dim();
}

std::vector<std::size_t> ConeGeometry::extreme_generators() const {
  std::vector<std::size_t> out;
  const std::size_t d = dim();
  if (d == 0) return out;
  if (d == 1) {
    out.push_back(0);
    return out;
  }
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    std::vector<QVector> normals;
    for (const auto& f : facets_)
      if (std::binary_search(f.generators.begin(), f.generators.end(), i)) normals.push_back(f.normal);
    if (rank_of(normals, ambient_dim()) == d - 1) out.push_back(i);
  }
  return out;
}

std::vector<std::vector<std::size_t>> ConeGeometry::faces() const {
  std::set<std::vector<std::size_t>> found;
  std::vector<std::size_t> all(generators_.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  if (dim() == 0) return {};
  std::vector<std::vector<std::size_t>> stack{all};
  found.insert(all);
  while (!stack.empty()) {
    auto face = stack.back();
    stack.pop_back();
    std::vector<QVector> gens;
    for (auto i : face) gens.push_back(generators_[i]);
    ConeGeometry sub(gens, ambient_dim());
    for (const auto& f : sub.facets()) {
      if (f.generators.empty()) continue;
      std::vector<std::size_t> mapped;
      for (auto j : f.generators) mapped.push_back(face[j]);
      if (found.insert(mapped).second) stack.push_back(mapped);
    }
  }
  return {found.begin(), found.end()};
}

std::vector<std::vector<std::size_t>> ConeGeometry::pulling_triangulation(const std::vector<std::size_t>& rank) const {
  auto extreme = extreme_generators();
  if (extreme.size() == dim()) return {extreme};
  std::size_t pulled = extreme.front();
  for (auto e : extreme)
    if (rank[e] < rank[pulled]) pulled = e;
  std::set<std::vector<std::size_t>> out;
  for (const auto& f : facets_) {
    if (std::binary_search(f.generators.begin(), f.generators.end(), pulled)) continue;
    std::vector<QVector> gens;
    std::vector<std::size_t> sub_rank;
    for (auto j : f.generators) {
      gens.push_back(generators_[j]);
      sub_rank.push_back(rank[j]);
    }
    ConeGeometry sub(gens, ambient_dim());
    for (const auto& simplex : sub.pulling_triangulation(sub_rank)) {
      std::vector<std::size_t> s{pulled};
      for (auto j : simplex) s.push_back(f.generators[j]);
      std::sort(s.begin(), s.end());
      out.insert(std::move(s));
    }
  }
  return {out.begin(), out.end()};
}

std::optional<QVector> ConeGeometry::linear_functional(const QVector& values) const {
  if (values.size() != generators_.size()) throw std::invalid_argument("one value per generator required");
  const std::size_t d = dim();
  QVector a(ambient_dim());
  if (d == 0) return a;
  if (independent()) {
    for (std::size_t i = 0; i < facets_.size(); ++i) a = add(a, scale(facets_[i].normal, values[i]));
    return a;
  }
  auto h = span_pairings(span_, generators_);
  std::vector<std::size_t> chosen;
  std::vector<QVector> chosen_rows;
  for (std::size_t i = 0; i < h.size() && chosen.size() < d; ++i) {
    chosen_rows.push_back(h[i]);
    if (rank_of(chosen_rows, d) == chosen_rows.size()) {
      chosen.push_back(i);
    } else {
      chosen_rows.pop_back();
    }
  }
  QMatrix hm = QMatrix::from_rows(chosen_rows, d);
  QVector rhs;
  for (auto i : chosen) rhs.push_back(values[i]);
  QVector lambda = mat_vec(inverse(hm), rhs);
  a = vec_mat(lambda, span_.rows());
  for (std::size_t i = 0; i < generators_.size(); ++i)
    if (dot(a, generators_[i]) != values[i]) return std::nullopt;
  return a;
}

std::vector<QVector> extreme_rays(const std::vector<QVector>& inequalities, const std::vector<QVector>& equalities,
                                  std::size_t ambient_dim) {
  QMatrix lifting = equalities.empty() ? QMatrix::identity(ambient_dim)
                                       : nullspace(QMatrix::from_rows(equalities, ambient_dim));
  const std::size_t l = lifting.rows();
  std::set<QVector> rays;
  if (l == 0) return {};
  std::vector<QVector> reduced;
  for (const auto& a : inequalities) {
    QVector r = mat_vec(lifting, a);
    if (!is_zero(r)) reduced.push_back(std::move(r));
  }
  auto feasible = [&](const QVector& y) {
    for (const auto& a : reduced)
      if (dot(a, y) < 0) return false;
    return true;
  };
  auto record = [&](const QVector& y) { rays.insert(primitive_integer_direction(vec_mat(y, lifting))); };
  if (l == 1) {
    for (int s : {1, -1}) {
      QVector y{Rational(s)};
      if (feasible(y)) record(y);
    }
    return {rays.begin(), rays.end()};
  }
  for_each_subset(reduced.size(), l - 1, [&](const std::vector<std::size_t>& subset) {
    QMatrix rows(subset.size(), l);
    for (std::size_t r = 0; r < subset.size(); ++r)
      for (std::size_t c = 0; c < l; ++c) rows(r, c) = reduced[subset[r]][c];
    QMatrix ns = nullspace(rows);
    if (ns.rows() != 1) return;
    QVector y = ns.row(0);
    if (feasible(y)) {
      record(y);
    } else {
      QVector ny = scale(y, -1);
      if (feasible(ny)) record(ny);
    }
  });
  return {rays.begin(), rays.end()};
}

bool has_positive_circuit(const std::vector<QVector>& vectors, std::size_t ambient_dim) {
  for (const auto& v : vectors)
    if (is_zero(v)) return true;
  if (vectors.empty()) return false;
  return !ConeGeometry(vectors, ambient_dim).pointed();
}

}  // namespace ssr
