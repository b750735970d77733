#include "ssr/numeric.hpp"

#include <stdexcept>

namespace ssr {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty number");
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  bool seen_slash = false;
  bool digits_before = false;
  bool digits_after = false;
  for (std::size_t i = start; i < text.size(); ++i) {
    char c = text[i];
    if (c == '/' && !seen_slash) {
      seen_slash = true;
    } else if (c >= '0' && c <= '9') {
      (seen_slash ? digits_after : digits_before) = true;
    } else {
      throw std::invalid_argument("not a rational number: '" + text + "'");
    }
  }
  if (!digits_before || (seen_slash && !digits_after)) {
    throw std::invalid_argument("not a rational number: '" + text + "'");
  }
  std::string body = text[0] == '+' ? text.substr(1) : text;
  Rational q;
  if (q.set_str(body, 10) != 0) throw std::invalid_argument("not a rational number: '" + text + "'");
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_string(const QVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += v[i].get_str();
  }
  return out + ")";
}

QVector zero_vector(std::size_t n) { return QVector(n); }

QVector unit_vector(std::size_t n, std::size_t i) {
  QVector v(n);
  v.at(i) = 1;
  return v;
}

bool is_zero(const QVector& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

QVector add(const QVector& a, const QVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector size mismatch");
  QVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

QVector subtract(const QVector& a, const QVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector size mismatch");
  QVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

QVector scale(const QVector& v, const Rational& s) {
  QVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] * s;
  return r;
}

Rational dot(const QVector& a, const QVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector size mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Integer abs_value(const Integer& a) { return a < 0 ? Integer(-a) : a; }

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer lcm_of_denominators(const QVector& v) {
  Integer l = 1;
  for (const auto& x : v) {
    Integer d = x.get_den();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
  }
  return l;
}

bool is_integral(const QVector& v) {
  for (const auto& x : v)
    if (x.get_den() != 1) return false;
  return true;
}

QVector primitive_integer_direction(const QVector& v) {
  if (is_zero(v)) throw std::invalid_argument("zero vector has no direction");
  Integer l = lcm_of_denominators(v);
  Integer g = 0;
  for (const auto& x : v) {
    Integer n = x.get_num() * (l / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
  }
  QVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] * Rational(l) / Rational(g);
  return r;
}

}  // namespace ssr
