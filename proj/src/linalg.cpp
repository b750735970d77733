#include "ssr/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace ssr {

QMatrix to_rational(const IntMatrix& m) {
  QMatrix q(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) q(i, j) = m(i, j);
  return q;
}

QMatrix matrix_from_vectors(const std::vector<QVector>& rows, std::size_t cols) {
  return QMatrix::from_rows(rows, cols);
}

QVector mat_vec(const IntMatrix& m, const QVector& v) {
  if (m.cols() != v.size()) throw std::invalid_argument("map/vector dimension mismatch");
  QVector r(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) r[i] += Rational(m(i, j)) * v[j];
  return r;
}

QVector mat_vec(const QMatrix& m, const QVector& v) {
  if (m.cols() != v.size()) throw std::invalid_argument("map/vector dimension mismatch");
  QVector r(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r[i] += m(i, j) * v[j];
  return r;
}

QVector vec_mat(const QVector& v, const QMatrix& m) {
  if (m.rows() != v.size()) throw std::invalid_argument("vector/matrix dimension mismatch");
  QVector r(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) r[j] += v[i] * m(i, j);
  }
  return r;
}

HermiteForm hermite_normal_form(const IntMatrix& m) {
  IntMatrix h = m;
  IntMatrix u = IntMatrix::identity(m.rows());
  std::size_t pr = 0;
  for (std::size_t col = 0; col < h.cols() && pr < h.rows(); ++col) {
    while (true) {
      std::optional<std::size_t> best;
      for (std::size_t i = pr; i < h.rows(); ++i) {
        if (h(i, col) == 0) continue;
        if (!best || abs_value(h(i, col)) < abs_value(h(*best, col))) best = i;
      }
      if (!best) break;
      h.swap_rows(pr, *best);
      u.swap_rows(pr, *best);
      bool cleared = true;
      for (std::size_t i = pr + 1; i < h.rows(); ++i) {
        if (h(i, col) == 0) continue;
        Integer q = floor_div(h(i, col), h(pr, col));
        h.add_row_multiple(i, pr, -q);
        u.add_row_multiple(i, pr, -q);
        if (h(i, col) != 0) cleared = false;
      }
      if (cleared) break;
    }
    if (h(pr, col) == 0) continue;
    if (h(pr, col) < 0) {
      h.negate_row(pr);
      u.negate_row(pr);
    }
    for (std::size_t i = 0; i < pr; ++i) {
      Integer q = floor_div(h(i, col), h(pr, col));
      if (q == 0) continue;
      h.add_row_multiple(i, pr, -q);
      u.add_row_multiple(i, pr, -q);
    }
    ++pr;
  }
  return {std::move(h), std::move(u)};
}

SmithForm smith_normal_form(const IntMatrix& m) {
  IntMatrix s = m;
  IntMatrix u = IntMatrix::identity(m.rows());
  IntMatrix v = IntMatrix::identity(m.cols());
  const std::size_t n = std::min(s.rows(), s.cols());
  for (std::size_t t = 0; t < n; ++t) {
    bool any = true;
    while (true) {
      std::optional<std::pair<std::size_t, std::size_t>> best;
      for (std::size_t i = t; i < s.rows(); ++i)
        for (std::size_t j = t; j < s.cols(); ++j) {
          if (s(i, j) == 0) continue;
          if (!best || abs_value(s(i, j)) < abs_value(s(best->first, best->second))) best = {i, j};
        }
      if (!best) {
        any = false;
        break;
      }
      s.swap_rows(t, best->first);
      u.swap_rows(t, best->first);
      s.swap_cols(t, best->second);
      v.swap_cols(t, best->second);
      bool clean = true;
      for (std::size_t i = t + 1; i < s.rows(); ++i) {
        if (s(i, t) == 0) continue;
        Integer q = floor_div(s(i, t), s(t, t));
        s.add_row_multiple(i, t, -q);
        u.add_row_multiple(i, t, -q);
        if (s(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < s.cols(); ++j) {
        if (s(t, j) == 0) continue;
        Integer q = floor_div(s(t, j), s(t, t));
        s.add_col_multiple(j, t, -q);
        v.add_col_multiple(j, t, -q);
        if (s(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      std::optional<std::size_t> offending;
      for (std::size_t i = t + 1; i < s.rows() && !offending; ++i)
        for (std::size_t j = t + 1; j < s.cols(); ++j)
          if (s(i, j) % s(t, t) != 0) {
            offending = i;
            break;
          }
      if (!offending) break;
      s.add_row_multiple(t, *offending, 1);
      u.add_row_multiple(t, *offending, 1);
    }
    if (!any) break;
    if (s(t, t) < 0) {
      s.negate_row(t);
      u.negate_row(t);
    }
  }
  return {std::move(s), std::move(u), std::move(v)};
}

Integer determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

Echelon reduced_row_echelon(const QMatrix& m) {
  QMatrix a = m;
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t col = 0; col < a.cols() && r < a.rows(); ++col) {
    std::size_t p = r;
    while (p < a.rows() && a(p, col) == 0) ++p;
    if (p == a.rows()) continue;
    a.swap_rows(r, p);
    Rational inv = 1 / a(r, col);
    for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, col) == 0) continue;
      Rational f = -a(i, col);
      a.add_row_multiple(i, r, f);
    }
    pivots.push_back(col);
    ++r;
  }
  QMatrix reduced(r, a.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) reduced(i, j) = a(i, j);
  return {std::move(reduced), std::move(pivots)};
}

Rational determinant(const QMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  QMatrix a = m;
  Rational det = 1;
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      a.swap_rows(k, p);
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rational f = -a(i, k) / a(k, k);
      a.add_row_multiple(i, k, f);
    }
  }
  return det;
}

std::size_t rank(const QMatrix& m) { return reduced_row_echelon(m).pivots.size(); }

std::size_t rank_of(const std::vector<QVector>& vectors, std::size_t ambient_dim) {
  return rank(QMatrix::from_rows(vectors, ambient_dim));
}

QMatrix nullspace(const QMatrix& m) {
  Echelon e = reduced_row_echelon(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<QVector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    QVector x(m.cols());
    x[f] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = -e.reduced(r, f);
    basis.push_back(std::move(x));
  }
  return QMatrix::from_rows(basis, m.cols());
}

IntMatrix integer_kernel(const IntMatrix& m) {
  const std::size_t n = m.cols();
  if (m.rows() == 0) return IntMatrix::identity(n);
  HermiteForm hf = hermite_normal_form(m.transpose());
  std::vector<std::vector<Integer>> rows;
  for (std::size_t i = 0; i < hf.h.rows(); ++i) {
    bool zero = true;
    for (std::size_t j = 0; j < hf.h.cols(); ++j)
      if (hf.h(i, j) != 0) {
        zero = false;
        break;
      }
    if (zero) rows.push_back(hf.u.row(i));
  }
  IntMatrix k = IntMatrix::from_rows(rows, n);
  // Canonical basis for reproducibility.
  HermiteForm reduced = hermite_normal_form(k);
  std::vector<std::vector<Integer>> kept;
  for (std::size_t i = 0; i < reduced.h.rows(); ++i) {
    auto r = reduced.h.row(i);
    bool zero = true;
    for (const auto& x : r)
      if (x != 0) zero = false;
    if (!zero) kept.push_back(std::move(r));
  }
  return IntMatrix::from_rows(kept, n);
}

IntMatrix clear_denominators(const QMatrix& m) {
  Integer l = 1;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Integer d = m(i, j).get_den();
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
    }
  IntMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Rational x = m(i, j) * Rational(l);
      out(i, j) = x.get_num();
    }
  return out;
}

QMatrix inverse(const QMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
  const std::size_t n = m.rows();
  QMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  Echelon e = reduced_row_echelon(aug);
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) throw std::domain_error("singular matrix");
  QMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  return inv;
}

EchelonBasis::EchelonBasis(QMatrix rows, std::size_t ambient_dim) : rows_(std::move(rows)), ambient_dim_(ambient_dim) {
  if (rows_.rows() > 0 && rows_.cols() != ambient_dim) throw std::invalid_argument("basis dimension mismatch");
  std::size_t last = 0;
  for (std::size_t i = 0; i < rows_.rows(); ++i) {
    std::size_t p = 0;
    while (p < rows_.cols() && rows_(i, p) == 0) ++p;
    if (p == rows_.cols() || (i > 0 && p <= last)) throw std::invalid_argument("rows not in echelon form");
    pivots_.push_back(p);
    last = p;
  }
}

EchelonBasis EchelonBasis::span_of(const std::vector<QVector>& vectors, std::size_t ambient_dim) {
  Echelon e = reduced_row_echelon(QMatrix::from_rows(vectors, ambient_dim));
  return EchelonBasis(std::move(e.reduced), ambient_dim);
}

std::optional<QVector> EchelonBasis::coordinates(const QVector& v) const {
  if (v.size() != ambient_dim_) throw std::invalid_argument("vector dimension mismatch");
  const std::size_t k = rows_.rows();
  QVector c(k);
  for (std::size_t r = 0; r < k; ++r) {
    Rational acc = v[pivots_[r]];
    for (std::size_t s = 0; s < r; ++s) acc -= c[s] * rows_(s, pivots_[r]);
    c[r] = acc / rows_(r, pivots_[r]);
  }
  for (std::size_t j = 0; j < ambient_dim_; ++j) {
    Rational acc = 0;
    for (std::size_t r = 0; r < k; ++r) acc += c[r] * rows_(r, j);
    if (acc != v[j]) return std::nullopt;
  }
  return c;
}

}  // namespace ssr
