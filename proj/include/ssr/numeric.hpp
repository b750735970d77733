#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

namespace ssr {

using Integer = mpz_class;
using Rational = mpq_class;
using QVector = std::vector<Rational>;

// Accepts "n", "-n" and "p/q"; the result is canonicalized.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);
std::string to_string(const QVector& v);

QVector zero_vector(std::size_t n);
QVector unit_vector(std::size_t n, std::size_t i);
bool is_zero(const QVector& v);
QVector add(const QVector& a, const QVector& b);
QVector subtract(const QVector& a, const QVector& b);
QVector scale(const QVector& v, const Rational& s);
Rational dot(const QVector& a, const QVector& b);

Integer abs_value(const Integer& a);
Integer floor_div(const Integer& a, const Integer& b);
Integer lcm_of_denominators(const QVector& v);
bool is_integral(const QVector& v);

// Smallest positive multiple of v with integer entries and content 1.
QVector primitive_integer_direction(const QVector& v);

}  // namespace ssr
