#include "ssr/lattice.hpp"

#include <stdexcept>

namespace ssr {

namespace {

std::vector<std::vector<Integer>> nonzero_rows(const IntMatrix& m) {
  std::vector<std::vector<Integer>> out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    for (const auto& x : r)
      if (x != 0) {
        out.push_back(std::move(r));
        break;
      }
  }
  return out;
}

}  // namespace

LatticeBasis LatticeBasis::from_generators(std::size_t ambient_dim, const std::vector<QVector>& generators) {
  for (const auto& g : generators)
    if (g.size() != ambient_dim) throw std::invalid_argument("lattice generator has wrong dimension");
  if (generators.empty()) return LatticeBasis(EchelonBasis(QMatrix(0, ambient_dim), ambient_dim));
  QMatrix q = QMatrix::from_rows(generators, ambient_dim);
  Integer d = 1;
  for (const auto& g : generators) {
    Integer l = lcm_of_denominators(g);
    mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), l.get_mpz_t());
  }
  IntMatrix scaled(q.rows(), q.cols());
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t j = 0; j < q.cols(); ++j) scaled(i, j) = Rational(q(i, j) * Rational(d)).get_num();
  auto rows = nonzero_rows(hermite_normal_form(scaled).h);
  QMatrix basis(rows.size(), ambient_dim);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < ambient_dim; ++j) basis(i, j) = Rational(rows[i][j]) / Rational(d);
  return LatticeBasis(EchelonBasis(std::move(basis), ambient_dim));
}

LatticeBasis LatticeBasis::standard(std::size_t ambient_dim) {
  return LatticeBasis(EchelonBasis(QMatrix::identity(ambient_dim), ambient_dim));
}

bool LatticeBasis::contains(const QVector& v) const {
  auto c = coordinates(v);
  return c && is_integral(*c);
}

bool LatticeBasis::contains(const LatticeBasis& other) const {
  if (other.ambient_dim() != ambient_dim()) return false;
  for (std::size_t i = 0; i < other.rank(); ++i)
    if (!contains(other.basis().row(i))) return false;
  return true;
}

LatticeBasis LatticeBasis::restrict_to_span(const std::vector<QVector>& spanning) const {
  const std::size_t k = rank();
  std::vector<QVector> coords;
  for (const auto& w : spanning) {
    auto c = coordinates(w);
    if (!c) throw std::invalid_argument("vector " + to_string(w) + " outside the lattice span");
    coords.push_back(std::move(*c));
  }
  // Z^k intersected with span(coords) is the integer kernel of its annihilator.
  QMatrix annihilator = nullspace(QMatrix::from_rows(coords, k));
  IntMatrix kernel = integer_kernel(clear_denominators(annihilator));
  std::vector<QVector> gens;
  for (std::size_t i = 0; i < kernel.rows(); ++i) {
    QVector a(k);
    for (std::size_t j = 0; j < k; ++j) a[j] = kernel(i, j);
    gens.push_back(vec_mat(a, basis()));
  }
  return from_generators(ambient_dim(), gens);
}

QVector primitive_vector(const QVector& v, const LatticeBasis& lattice) {
  if (is_zero(v)) throw std::invalid_argument("primitive vector of zero");
  auto c = lattice.coordinates(v);
  if (!c) throw std::invalid_argument("vector " + to_string(v) + " outside the lattice span");
  QVector p = primitive_integer_direction(*c);
  return vec_mat(p, lattice.basis());
}

std::optional<Integer> lattice_index(const LatticeBasis& sub, const LatticeBasis& sup) {
  if (!sup.contains(sub)) throw std::invalid_argument("sublattice not contained in superlattice");
  if (sub.rank() < sup.rank()) return std::nullopt;
  const std::size_t k = sup.rank();
  IntMatrix m(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    auto c = *sup.coordinates(sub.basis().row(i));
    for (std::size_t j = 0; j < k; ++j) m(i, j) = c[j].get_num();
  }
  return abs_value(determinant(m));
}

LatticeBasis preimage_lattice(const IntMatrix& map, const LatticeBasis& target, const LatticeBasis& source_sup) {
  if (map.cols() != source_sup.ambient_dim() || map.rows() != target.ambient_dim())
    throw std::invalid_argument("map dimensions do not match the lattices");
  const std::size_t k = source_sup.rank();
  const std::size_t r = target.rank();
  const std::size_t t = map.rows();
  // Columns: images of the source basis, then minus the target basis.
  QMatrix system(t, k + r);
  for (std::size_t j = 0; j < k; ++j) {
    QVector y = mat_vec(map, source_sup.basis().row(j));
    for (std::size_t i = 0; i < t; ++i) system(i, j) = y[i];
  }
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < t; ++i) system(i, k + j) = -target.basis()(j, i);
  IntMatrix kernel = integer_kernel(clear_denominators(system));
  std::vector<QVector> gens;
  for (std::size_t i = 0; i < kernel.rows(); ++i) {
    QVector a(k);
    for (std::size_t j = 0; j < k; ++j) a[j] = kernel(i, j);
    if (!is_zero(a)) gens.push_back(vec_mat(a, source_sup.basis()));
  }
  return LatticeBasis::from_generators(source_sup.ambient_dim(), gens);
}

LatticeBasis image_lattice(const IntMatrix& map, const LatticeBasis& lattice) {
  std::vector<QVector> gens;
  for (std::size_t i = 0; i < lattice.rank(); ++i) gens.push_back(mat_vec(map, lattice.basis().row(i)));
  return LatticeBasis::from_generators(map.rows(), gens);
}

}  // namespace ssr
