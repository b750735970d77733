#pragma once

#include <optional>
#include <vector>

#include "ssr/matrix.hpp"

namespace ssr {

struct HermiteForm {
  IntMatrix h;  // row-style HNF, zero rows last
  IntMatrix u;  // unimodular, h = u * m
};

struct SmithForm {
  IntMatrix s;  // diagonal, s(i,i) | s(i+1,i+1)
  IntMatrix u;
  IntMatrix v;  // s = u * m * v
};

HermiteForm hermite_normal_form(const IntMatrix& m);
SmithForm smith_normal_form(const IntMatrix& m);

Integer determinant(const IntMatrix& m);
Rational determinant(const QMatrix& m);

struct Echelon {
  QMatrix reduced;                  // reduced row echelon form, zero rows dropped
  std::vector<std::size_t> pivots;  // pivot column of each row
};
Echelon reduced_row_echelon(const QMatrix& m);

std::size_t rank(const QMatrix& m);
std::size_t rank_of(const std::vector<QVector>& vectors, std::size_t ambient_dim);

// Rows form a basis of { x : m x = 0 }.
QMatrix nullspace(const QMatrix& m);

// Rows form a Z-basis of { z in Z^cols : m z = 0 }.
IntMatrix integer_kernel(const IntMatrix& m);

// Scales rows by one positive integer so all entries become integers.
IntMatrix clear_denominators(const QMatrix& m);

QMatrix inverse(const QMatrix& m);

// A basis of the row space kept in echelon form so coordinates can be read off
// by forward substitution.
class EchelonBasis {
 public:
  EchelonBasis() = default;
  EchelonBasis(QMatrix rows, std::size_t ambient_dim);  // rows must be independent and in echelon form
  static EchelonBasis span_of(const std::vector<QVector>& vectors, std::size_t ambient_dim);

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t dim() const { return rows_.rows(); }
  const QMatrix& rows() const { return rows_; }
  std::optional<QVector> coordinates(const QVector& v) const;
  bool contains(const QVector& v) const { return coordinates(v).has_value(); }

 private:
  QMatrix rows_;
  std::vector<std::size_t> pivots_;
  std::size_t ambient_dim_ = 0;
};

}  // namespace ssr
