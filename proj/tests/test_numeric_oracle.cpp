#include "doctest.h"

#include "lelong/errors.hpp"
#include "lelong/indicator.hpp"
#include "lelong/numeric_oracle.hpp"
#include "support.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

using namespace lelong;
using testing_support::es;
using testing_support::qv;
using cd = std::complex<double>;

namespace {

WeightExpr poly(std::vector<std::pair<cd, std::vector<int>>> terms) {
    std::vector<PolyTerm> t;
    for (auto& [c, e] : terms) t.push_back({c, e});
    return WeightExpr::poly_log(std::move(t));
}

WeightExpr counterexample() { return WeightExpr::max({WeightExpr::neg_pow_log(0, 0.5), WeightExpr::coord_log(1)}); }

WeightExpr unit_polynomial(const ExponentSet& s) {
    std::vector<PolyTerm> t;
    for (const auto& j : s.points()) {
        std::vector<int> e;
        for (const auto& x : j) e.push_back(static_cast<int>(x.convert_to<double>()));
        t.push_back({1.0, e});
    }
    return WeightExpr::poly_log(std::move(t));
}

// Integer exponent set with entries <= 5, every axis blocked.
ExponentSet random_integer_set(std::mt19937& rng) {
    std::uniform_int_distribution<int> e(0, 5), cnt(1, 4);
    std::vector<QVector> pts;
    const int m = cnt(rng);
    for (int i = 0; i < m; ++i) {
        QVector p{e(rng), e(rng)};
        if (p[0] == 0 && p[1] == 0) p[i % 2] = 1;
        pts.push_back(p);
    }
    std::uniform_int_distribution<int> ax(1, 5);
    pts.push_back(qv({ax(rng), 0}));
    pts.push_back(qv({0, ax(rng)}));
    return ExponentSet(2, std::move(pts));
}

// Midpoint rule for the mean of log|1 + e^{i phi}| on [0, 2 pi).
double mean_log_one_plus_circle(int nodes) {
    double s = 0.0;
    for (int j = 0; j < nodes; ++j) {
        const double phi = 2.0 * std::numbers::pi * (j + 0.5) / nodes;
        s += std::log(std::abs(1.0 + std::polar(1.0, phi)));
    }
    return s / nodes;
}

double rel_err(double x, double exact) { return std::abs(x - exact) / std::max(1e-300, std::abs(exact)); }

const RadialSchedule kDefault{};

RadialSchedule deep_schedule() {
    RadialSchedule s;
    s.levels = {-1e2, -1e3, -1e4, -1e5};
    return s;
}

}  // namespace

TEST_CASE("schedule validation") {
    RadialSchedule s;
    CHECK_NOTHROW(s.validate());
    s.levels = {-5};
    CHECK_THROWS_AS(s.validate(), InputError);
    s.levels = {-5, -3};
    CHECK_THROWS_AS(s.validate(), InputError);
    s.levels = {-5, -10};
    s.angular_nodes = 32;
    CHECK_THROWS_AS(s.validate(), InputError);
    const auto lin = linear_schedule(-30, 3, 128);
    CHECK(lin.levels == std::vector<double>{-10, -20, -30});
    CHECK_THROWS_AS(linear_schedule(30, 3, 128), InputError);
}

TEST_CASE("extrapolation") {
    // y = 2 + 3/|r| exactly.
    const double r[] = {-5, -10, -20, -30};
    double y[4];
    for (int i = 0; i < 4; ++i) y[i] = 2.0 + 3.0 / std::abs(r[i]);
    const auto [v, e] = extrapolate(r, y, Extrapolation::richardson);
    CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(e == doctest::Approx(3.0 / 20 - 3.0 / 30));
    CHECK(extrapolate(r, y, Extrapolation::last_level).first == y[3]);
}

TEST_CASE("torus_mean examples") {
    const double t1[] = {-2, -3};
    CHECK(torus_mean(WeightExpr::coord_log(0), t1, 64) == doctest::Approx(-2.0).epsilon(1e-14));

    const double t2[] = {-1, -1};
    const double oracle = -1.0 + mean_log_one_plus_circle(10000);
    CHECK(std::abs(oracle + 1.0) < 1e-4);
    CHECK(std::abs(torus_mean(poly({{1.0, {1, 0}}, {1.0, {0, 1}}}), t2, 256) - oracle) < 5e-3);

    const double t3[] = {-2, -2};
    CHECK(torus_mean(poly({{1.0, {1, 0}}, {-0.5, {0, 0}}}), t3, 64) == doctest::Approx(std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("mean-value sanity") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> tdist(-6.0, -0.1), cmod(0.01, 0.99), cang(-3.0, 3.0);
    for (int i = 0; i < 40; ++i) {
        const std::size_t k = i % 2;
        const double t[] = {tdist(rng), tdist(rng)};
        const cd c = std::polar(cmod(rng), cang(rng));
        if (std::abs(std::log(std::abs(c)) - t[k]) < 0.2) continue;
        std::vector<int> e{0, 0};
        e[k] = 1;
        const auto w = poly({{1.0, e}, {-c, {0, 0}}});
        CHECK(std::abs(torus_mean(w, t, 256) - std::max(t[k], std::log(std::abs(c)))) < 1e-6);
    }
}

TEST_CASE("clipping is counted") {
    const double t[] = {-1.0, -1.0};
    const PolarFunction minus_inf = [](std::span<const double>, std::span<const double>) {
        return -std::numeric_limits<double>::infinity();
    };
    const auto tm = torus_mean_detailed(minus_inf, t, 64);
    CHECK(tm.clipped == 64 * 64);
    CHECK(tm.value == -1e6);
    const double a[] = {1.0, 1.0};
    CHECK_THROWS_AS(directional_lelong_numeric(minus_inf, a, kDefault), NumericError);
}

TEST_CASE("directional_lelong_numeric examples") {
    const auto w = poly({{1.0, {2, 0}}, {1.0, {0, 3}}});
    const double a11[] = {1, 1};
    const auto e = directional_lelong_numeric(w, a11, kDefault);
    CHECK(e.value == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(e.levels_used == 4);
    CHECK(e.diagnostics.size() == 4);
    CHECK(e.error >= 0.0);

    const double a[] = {0.7, 2.5};
    CHECK(directional_lelong_numeric(WeightExpr::coord_log(0), a, kDefault).value == doctest::Approx(0.7).epsilon(1e-12));

    for (const auto& d : {std::vector<double>{1, 1}, std::vector<double>{3, 1}, std::vector<double>{1, 3}}) {
        const auto c = directional_lelong_numeric(counterexample(), d, deep_schedule());
        CHECK(std::abs(c.value) <= 0.02);
    }
    const double bad[] = {1.0, 0.0};
    CHECK_THROWS_AS(directional_lelong_numeric(w, bad, kDefault), InputError);
}

TEST_CASE("directional numeric matches the exponent-set value") {
    std::mt19937 rng(42);
    RadialSchedule s = linear_schedule(-30, 4, 256);
    std::uniform_int_distribution<int> dd(1, 4);
    for (int i = 0; i < 15; ++i) {
        const auto set = random_integer_set(rng);
        const QVector aq{dd(rng), dd(rng)};
        const auto exact = to_double(directional_lelong_exact(set, aq).value);
        const double a[] = {to_double(aq[0]), to_double(aq[1])};
        const auto num = directional_lelong_numeric(unit_polynomial(set), a, s);
        CHECK(rel_err(num.value, exact) <= 0.02);
    }
}

TEST_CASE("classical_lelong_numeric examples") {
    RadialSchedule s;
    s.angular_nodes = 128;
    const auto c1 = classical_lelong_numeric(WeightExpr::coord_log(0), 2, s);
    CHECK(c1.value == doctest::Approx(1.0).epsilon(0.02));
    const auto c2 = classical_lelong_numeric(poly({{1.0, {2, 0}}, {1.0, {0, 3}}}), 2, s);
    CHECK(c2.value == doctest::Approx(2.0).epsilon(0.02));
    const auto c3 = classical_lelong_numeric(poly({{1.0, {1, 1}}}), 2, s);
    CHECK(c3.value == doctest::Approx(2.0).epsilon(0.02));
    // Kiselman consistency: the sphere estimate and the directional one at (1,1).
    for (const auto* c : {&c1, &c2, &c3}) {
        REQUIRE(c->checks.size() == 1);
        CHECK(c->checks[0].first == "directional_diagonal");
        CHECK(std::abs(c->checks[0].second - c->value) <= 0.02 * c->value + c->error);
    }
    CHECK(classical_lelong_numeric(poly({{1.0, {3}}}), 1, s).value == doctest::Approx(3.0).epsilon(1e-9));
    RadialSchedule s3;
    s3.angular_nodes = 64;
    s3.radial_nodes = 6;
    s3.levels = {-10, -20, -30};
    CHECK(classical_lelong_numeric(WeightExpr::coord_log(2), 3, s3).value == doctest::Approx(1.0).epsilon(0.02));
    CHECK_THROWS_AS(classical_lelong_numeric(WeightExpr::coord_log(0), 4, s), InputError);
}

TEST_CASE("swept_measure_apply examples") {
    const auto simplex = es(2, {qv({1, 0}), qv({0, 1})});
    CHECK(swept_measure_apply(simplex, WeightExpr::coord_log(0), -5, 64) == doctest::Approx(-5.0).epsilon(1e-12));
    CHECK(swept_measure_apply(es(2, {qv({2, 0}), qv({0, 3})}), WeightExpr::coord_log(1), -6, 64) ==
          doctest::Approx(-12.0).epsilon(1e-12));
    CHECK(swept_measure_apply(es(2, {qv({4, 0}), qv({1, 1}), qv({0, 4})}), poly({{1.0, {1, 1}}}), -4, 64) ==
          doctest::Approx(-32.0).epsilon(1e-12));
}

TEST_CASE("generalized_lelong_numeric examples") {
    CHECK(generalized_lelong_numeric(es(2, {qv({1, 0}), qv({0, 1})}), poly({{1.0, {2, 0}}, {1.0, {0, 3}}}), kDefault).value ==
          doctest::Approx(2.0).epsilon(0.02));
    CHECK(generalized_lelong_numeric(es(2, {qv({2, 0}), qv({0, 3})}), WeightExpr::coord_log(0), kDefault).value ==
          doctest::Approx(3.0).epsilon(0.02));
    CHECK(generalized_lelong_numeric(es(2, {qv({4, 0}), qv({1, 1}), qv({0, 4})}), poly({{1.0, {1, 1}}}), kDefault).value ==
          doctest::Approx(8.0).epsilon(0.02));
}

TEST_CASE("swept measure converges to the exact generalized number") {
    std::mt19937 rng(43);
    for (int i = 0; i < 8; ++i) {
        const auto su = random_integer_set(rng);
        const auto sphi = testing_support::random_exponent_set(rng, 2, true);
        const double exact = to_double(generalized_lelong_exact(su, sphi).value);
        const double r = -30.0;
        const double ratio = swept_measure_apply(sphi, unit_polynomial(su), r, 256) / r;
        CHECK(rel_err(ratio, exact) <= 0.02);
    }
}

TEST_CASE("rescaled functions keep the generalized number") {
    const auto u = poly({{1.0, {1, 0}}, {1.0, {0, 2}}});
    const auto phi = es(2, {qv({1, 0}), qv({0, 1})});
    const double exact = to_double(generalized_lelong_exact(es(2, {qv({1, 0}), qv({0, 2})}), phi).value);
    double previous = INFINITY;
    for (unsigned m : {1u, 2u, 4u, 8u}) {
        const double v = generalized_lelong_numeric(phi, scaling_transform(u, m), kDefault).value;
        const double dev = std::abs(v - exact);
        CHECK(dev <= 0.05 * exact);
        CHECK(dev <= previous);
        previous = dev;
    }
    const auto w = poly({{1.0, {2, 0}}, {1.0, {0, 3}}, {1.0, {1, 1}}});
    const double a[] = {1.0, 2.0};
    const double base = directional_lelong_numeric(w, a, kDefault).value;
    for (unsigned m : {1u, 2u, 4u})
        CHECK(directional_lelong_numeric(scaling_transform(w, m), a, kDefault).value == doctest::Approx(base).epsilon(0.01));
}

TEST_CASE("slice_lelong examples") {
    CHECK(slice_lelong(counterexample(), 0, kDefault).value == doctest::Approx(1.0).epsilon(0.01));
    const auto w = WeightExpr::max({WeightExpr::scale(2, WeightExpr::coord_log(0)), WeightExpr::scale(3, WeightExpr::coord_log(1))});
    CHECK(slice_lelong(w, 0, kDefault).value == doctest::Approx(3.0).epsilon(0.01));
    CHECK(slice_lelong(w, 1, kDefault).value == doctest::Approx(2.0).epsilon(0.01));
    CHECK(slice_lelong(WeightExpr::max({WeightExpr::coord_log(0), WeightExpr::coord_log(1)}), 0, kDefault).value ==
          doctest::Approx(1.0).epsilon(0.01));
    CHECK_THROWS_AS(slice_lelong(WeightExpr::coord_log(0), 0, kDefault), NumericError);
    CHECK_THROWS_AS(slice_lelong(WeightExpr::coord_log(0), 2, kDefault), InputError);
}

TEST_CASE("indicator_profile examples") {
    const std::vector<std::vector<double>> dirs{{1, 1}, {3, 1}, {1, 3}};
    const auto p = indicator_profile(poly({{1.0, {2, 0}}, {1.0, {0, 3}}}), dirs, kDefault);
    REQUIRE(p.size() == 3);
    CHECK(p[0].estimate.value == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(p[1].estimate.value == doctest::Approx(3.0).epsilon(1e-3));
    CHECK(p[2].estimate.value == doctest::Approx(2.0).epsilon(1e-3));
    for (const auto& e : indicator_profile(counterexample(), dirs, deep_schedule())) {
        CHECK(e.error.empty());
        CHECK(std::abs(e.estimate.value) <= 0.02);
    }
    for (const auto& e : indicator_profile(WeightExpr::coord_log(0), dirs, kDefault))
        CHECK(e.estimate.value == doctest::Approx(e.direction[0]).epsilon(1e-12));
    const auto bad = indicator_profile(WeightExpr::coord_log(0), {{1, 1}, {-1, 1}}, kDefault);
    CHECK(bad[0].error.empty());
    CHECK_FALSE(bad[1].error.empty());
}

TEST_CASE("PSH_* detection") {
    CHECK(psh_star_violations(WeightExpr::coord_log(0), 2) == std::vector<std::size_t>{1});
    CHECK(psh_star_violations(counterexample(), 2).empty());
    CHECK(psh_star_violations(poly({{1.0, {1, 1}}}), 2) == std::vector<std::size_t>{0, 1});
    CHECK(psh_star_violations(poly({{1.0, {2, 0}}, {1.0, {0, 3}}}), 2).empty());
}

TEST_CASE("lower bound by slice masses") {
    // Multicircled weights with finite slices: w >= A max_k log|z_k| on
    // |z_k| <= 1/2 with A = 1 + largest slice mass.
    const WeightExpr ws[] = {
        counterexample(),
        WeightExpr::max({WeightExpr::scale(2, WeightExpr::coord_log(0)), WeightExpr::scale(3, WeightExpr::coord_log(1))}),
        WeightExpr::max({WeightExpr::coord_log(0), WeightExpr::neg_pow_log(1, 0.7)}),
    };
    std::mt19937 rng(44);
    std::uniform_real_distribution<double> mod(1e-6, 0.5), ang(-3.1, 3.1);
    for (const auto& w : ws) {
        double a = 0.0;
        for (std::size_t k = 0; k < 2; ++k) a = std::max(a, slice_lelong(w, k, kDefault).value);
        a += 1.0;
        for (int i = 0; i < 500; ++i) {
            const cd z[] = {std::polar(mod(rng), ang(rng)), std::polar(mod(rng), ang(rng))};
            CHECK(eval_expr(w, z) >= a * std::max(std::log(std::abs(z[0])), std::log(std::abs(z[1]))));
        }
    }
}

TEST_CASE("determinism") {
    const auto w = poly({{1.0, {1, 0}}, {cd(0.3, 2), {0, 2}}, {1.0, {3, 1}}});
    const auto phi = es(2, {qv({4, 0}), qv({1, 1}), qv({0, 4})});
    const auto a = generalized_lelong_numeric(phi, w, kDefault);
    const auto b = generalized_lelong_numeric(phi, w, kDefault);
    CHECK(std::memcmp(&a.value, &b.value, sizeof(double)) == 0);
    CHECK(std::memcmp(&a.error, &b.error, sizeof(double)) == 0);
    for (std::size_t i = 0; i < a.diagnostics.size(); ++i)
        CHECK(std::memcmp(&a.diagnostics[i].raw, &b.diagnostics[i].raw, sizeof(double)) == 0);
}
