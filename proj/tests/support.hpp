#pragma once

#include "lelong/poly_geom.hpp"
#include "lelong/rational.hpp"

#include <random>
#include <vector>

namespace testing_support {

using lelong::ExponentSet;
using lelong::QVector;
using lelong::Rational;

inline QVector qv(std::initializer_list<Rational> xs) { return QVector(xs); }

inline ExponentSet es(std::size_t n, std::vector<QVector> pts) { return ExponentSet(n, std::move(pts)); }

// Rational in {1/3, 1/2, 2/3, 1, ..., max} drawn from small numerators and
// denominators; zero with probability `p_zero`.
inline Rational random_entry(std::mt19937& rng, int max_num, double p_zero) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(rng) < p_zero) return 0;
    std::uniform_int_distribution<int> den(1, 3);
    const int d = den(rng);
    std::uniform_int_distribution<int> num(1, max_num * d);
    return Rational(num(rng), d);
}

// Random exponent set with every axis blocked; `convenient` adds a point on
// each coordinate axis so the diagram meets all axes.
inline ExponentSet random_exponent_set(std::mt19937& rng, std::size_t n, bool convenient, int max_num = 5) {
    std::uniform_int_distribution<int> count(1, 5);
    std::vector<QVector> pts;
    const int m = count(rng);
    for (int i = 0; i < m; ++i) {
        QVector p(n);
        bool nonzero = false;
        for (auto& x : p) {
            x = random_entry(rng, max_num, 0.35);
            nonzero = nonzero || x != 0;
        }
        if (!nonzero) p[i % n] = 1;
        pts.push_back(std::move(p));
    }
    const auto verts = lelong::dominated_hull(ExponentSet(n, pts)).hull_vertices;
    for (std::size_t k = 0; k < n; ++k) {
        bool blocked = false;
        for (const auto& p : verts) blocked = blocked || p[k] > 0;
        if (convenient || !blocked) {
            QVector e(n, Rational(0));
            e[k] = random_entry(rng, max_num, 0.0);
            pts.push_back(std::move(e));
        }
    }
    return ExponentSet(n, std::move(pts));
}

inline QVector negated(const QVector& v) {
    QVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = -v[i];
    return out;
}

}  // namespace testing_support
