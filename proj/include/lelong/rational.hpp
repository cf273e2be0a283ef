#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lelong {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

// Dense exact vector; exponent vectors and points of R^n live here.
using QVector = std::vector<Rational>;
using QMatrix = std::vector<QVector>;

// Accepts "p", "-p", "p/q". Throws InputError on anything else or q == 0.
Rational parse_rational(std::string_view text);

// Canonical "p" or "p/q" form.
std::string to_string(const Rational& q);
std::string to_string(std::span<const Rational> v);

double to_double(const Rational& q);
std::vector<double> to_double(std::span<const Rational> v);

Rational dot(std::span<const Rational> a, std::span<const Rational> b);

Rational factorial(unsigned n);

// Lexicographic comparison; QVector has operator< already, this is the
// three-way form used by sort/unique helpers.
std::strong_ordering lex_compare(std::span<const Rational> a, std::span<const Rational> b);

}  // namespace lelong
