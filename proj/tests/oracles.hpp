#pragma once

// Brute-force reference computations used only by the tests.

#include <vector>

#include "ssr/lattice.hpp"

namespace oracle {

using ssr::Integer;
using ssr::IntMatrix;
using ssr::QVector;
using ssr::Rational;

inline Integer cofactor_determinant(const IntMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  Integer det = 0;
  for (std::size_t j = 0; j < n; ++j) {
    IntMatrix minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0, cc = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = m(r, c);
      }
    Integer term = m(0, j) * cofactor_determinant(minor);
    det += (j % 2 == 0) ? term : Integer(-term);
  }
  return det;
}

inline std::vector<QVector> integer_points_in_box(std::size_t n, long lo, long hi) {
  std::vector<QVector> out;
  std::vector<long> x(n, lo);
  while (true) {
    out.emplace_back(x.begin(), x.end());
    std::size_t i = 0;
    while (i < n && x[i] == hi) x[i++] = lo;
    if (i == n) break;
    ++x[i];
  }
  return out;
}

// Integer points p with p = sum a_i g_i, 0 <= a_i < 1, for independent integer
// generators spanning Q^n. Enumerates the bounding box of the parallelepiped.
inline std::vector<QVector> parallelepiped_points(const std::vector<QVector>& gens) {
  const std::size_t n = gens.size();
  std::vector<long> lo(n, 0), hi(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& g : gens) {
      long v = g[i].get_num().get_si();
      if (v < 0) lo[i] += v;
      if (v > 0) hi[i] += v;
    }
  ssr::QMatrix gm = ssr::QMatrix::from_rows(gens, n);
  ssr::QMatrix inv = ssr::inverse(gm);
  std::vector<QVector> out;
  std::vector<long> x = lo;
  while (true) {
    QVector p(x.begin(), x.end());
    QVector a = ssr::vec_mat(p, inv);
    bool inside = true;
    for (const auto& c : a)
      if (c < 0 || c >= 1) inside = false;
    if (inside) out.push_back(p);
    std::size_t i = 0;
    while (i < n && x[i] == hi[i]) {
      x[i] = lo[i];
      ++i;
    }
    if (i == n) break;
    ++x[i];
  }
  return out;
}

inline Integer count_parallelepiped_points(const std::vector<QVector>& gens) {
  return Integer(static_cast<unsigned long>(parallelepiped_points(gens).size()));
}

}  // namespace oracle

namespace oracle {

// Lattice points of the half-open parallelepiped spanned by generators of a
// full-rank cone in its own lattice, counted in lattice coordinates.
inline Integer count_cone_box_points(const std::vector<QVector>& gens, const ssr::LatticeBasis& lattice) {
  std::vector<QVector> coords;
  for (const auto& g : gens) coords.push_back(*lattice.coordinates(g));
  return count_parallelepiped_points(coords);
}

}  // namespace oracle

#include <functional>
#include <map>
#include <set>

namespace oracle {

// Cells of a simplicial cone described by chains of faces: along each ordering
// of the generators, take the point of the latest marked face of each prefix.
// Faces are bitmasks over the generators; points are compared as directions.
// Degenerate chains are dropped.
inline std::set<std::set<QVector>> chain_cells(std::size_t count, const std::map<unsigned, QVector>& marked,
                                               const std::function<bool(unsigned, unsigned)>& before) {
  std::vector<std::size_t> perm(count);
  for (std::size_t i = 0; i < count; ++i) perm[i] = i;
  std::set<std::set<QVector>> cells;
  do {
    std::set<QVector> cell;
    unsigned prefix = 0;
    for (auto i : perm) {
      prefix |= 1u << i;
      std::optional<unsigned> last;
      for (const auto& [mask, point] : marked)
        if ((mask & prefix) == mask && (!last || before(*last, mask))) last = mask;
      cell.insert(ssr::primitive_integer_direction(marked.at(*last)));
    }
    if (cell.size() == count) cells.insert(cell);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return cells;
}

}  // namespace oracle
