#include "lelong/rational.hpp"

#include "lelong/errors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace lelong {

namespace {

bool is_integer_literal(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    const auto num = text.substr(0, slash);
    const auto den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den) || (den.front() == '-' || den.front() == '+'))
        throw InputError("malformed rational '" + std::string(text) + "'");
    const Integer d{std::string(den)};
    if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    std::string n(num);
    if (n.front() == '+') n.erase(0, 1);
    return Rational(Integer{n}, d);
}

std::string to_string(const Rational& q) { return q.str(); }

std::string to_string(std::span<const Rational> v) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << v[i].str();
    }
    os << ')';
    return os.str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::vector<double> to_double(std::span<const Rational> v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& q : v) out.push_back(to_double(q));
    return out;
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Rational factorial(unsigned n) {
    Rational f = 1;
    for (unsigned k = 2; k <= n; ++k) f *= k;
    return f;
}

std::strong_ordering lex_compare(std::span<const Rational> a, std::span<const Rational> b) {
    const auto n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] < b[i]) return std::strong_ordering::less;
        if (b[i] < a[i]) return std::strong_ordering::greater;
    }
    return a.size() <=> b.size();
}

}  // namespace lelong
