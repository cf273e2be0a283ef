#include "lelong/indicator.hpp"

#include "lelong/errors.hpp"

#include <cmath>
#include <limits>

namespace lelong {

std::string_view to_string(LelongKind kind) {
    switch (kind) {
        case LelongKind::directional: return "directional";
        case LelongKind::generalized: return "generalized";
        case LelongKind::newton_number: return "newton_number";
        case LelongKind::tau: return "tau";
    }
    return "unknown";
}

Indicator::Indicator(const ExponentSet& generators) : generators_(generators.reduced()) {}

double indicator_eval(const Indicator& phi, std::span<const std::complex<double>> y) {
    const auto n = phi.dimension();
    if (y.size() != n) throw InputError("indicator_eval: point has wrong dimension");
    std::vector<double> logs(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double r = std::abs(y[k]);
        if (!(r < 1.0)) throw InputError("indicator_eval: point outside the unit polydisk");
        logs[k] = r == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(r);
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& j : phi.generators().points()) {
        double v = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            if (j[k] != 0) v += to_double(j[k]) * logs[k];
        best = std::max(best, v);
    }
    return best;
}

Rational indicator_eval_exact(const Indicator& phi, std::span<const Rational> log_moduli) {
    if (log_moduli.size() != phi.dimension()) throw InputError("indicator_eval: point has wrong dimension");
    for (const auto& x : log_moduli)
        if (x > 0) throw InputError("indicator_eval: log-modulus must be nonpositive");
    return phi.generators().support(log_moduli);
}

LelongValue directional_lelong_exact(const ExponentSet& su, std::span<const Rational> a) {
    if (a.size() != su.dimension()) throw InputError("directional Lelong number: direction has wrong dimension");
    for (const auto& x : a)
        if (x <= 0) throw InputError("directional Lelong number: direction coordinates must be positive");
    return {su.min_pairing(a), LelongKind::directional};
}

LelongValue generalized_lelong_exact(const ExponentSet& su, const ExponentSet& sphi) {
    if (su.dimension() != sphi.dimension()) throw InputError("generalized Lelong number: dimension mismatch");
    const auto gamma = gamma_measure(sphi);
    Rational sum = 0;
    for (const auto& atom : gamma.atoms) {
        QVector a(atom.vertex.size());
        for (std::size_t k = 0; k < a.size(); ++k) a[k] = -atom.vertex[k];
        sum += su.min_pairing(a) * atom.mass;
    }
    return {factorial(static_cast<unsigned>(su.dimension())) * sum, LelongKind::generalized};
}

LelongValue newton_number(const ExponentSet& s) {
    auto via_pairing = generalized_lelong_exact(s, s);
    const Rational via_mass = factorial(static_cast<unsigned>(s.dimension())) * gamma_measure(s).total_mass;
    if (via_pairing.value != via_mass)
        throw std::logic_error("newton number: pairing route " + to_string(via_pairing.value) + " != mass route " +
                               to_string(via_mass));
    return {via_mass, LelongKind::newton_number};
}

LelongValue tau(const ExponentSet& sphi, std::size_t k) {
    const auto n = sphi.dimension();
    if (k >= n) throw InputError("tau: axis index out of range");
    QVector e(n, Rational(0));
    e[k] = 1;
    auto v = generalized_lelong_exact(ExponentSet(n, {e}), sphi);
    v.kind = LelongKind::tau;
    for (const auto& t : sublevel_vertices(sphi).extreme_points)
        if (t[k] == 0) v.wall_contact = true;
    return v;
}

Indicator rescaled_indicator(const Indicator& phi, unsigned m) {
    if (m == 0) throw InputError("rescaled indicator: m must be positive");
    // y -> y^m multiplies every exponent by m, the outer 1/m divides it back.
    return Indicator(phi.generators().scaled(Rational(m)).scaled(Rational(1, m)));
}

}  // namespace lelong
