#pragma once

// Exact Lelong-number calculus on piecewise-linear indicators
// Phi(y) = max_J <J, log|y|>.

#include "lelong/poly_geom.hpp"
#include "lelong/rational.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace lelong {

enum class LelongKind { directional, generalized, newton_number, tau };

std::string_view to_string(LelongKind kind);

struct LelongValue {
    Rational value;
    LelongKind kind;
    // tau only: the sublevel polyhedron meets the wall t_k = 0, so for a
    // merely multicircled weight the value bounds nu(log|y_k|, Phi) from above.
    bool wall_contact = false;
};

// Indicator stored by its generators reduced to hull vertices; two
// indicators are equal iff the reduced sets are.
class Indicator {
public:
    explicit Indicator(const ExponentSet& generators);

    const ExponentSet& generators() const noexcept { return generators_; }
    std::size_t dimension() const noexcept { return generators_.dimension(); }

    bool operator==(const Indicator&) const = default;

private:
    ExponentSet generators_;
};

// max_J <J, log|y|> for y in the closed-at-zero unit polydisk. A coordinate
// y_k = 0 only affects generators with J_k > 0; returns -infinity when every
// generator sees such a coordinate. Throws InputError when |y_k| >= 1.
double indicator_eval(const Indicator& phi, std::span<const std::complex<double>> y);

// Same rule evaluated exactly at log-moduli (all <= 0).
Rational indicator_eval_exact(const Indicator& phi, std::span<const Rational> log_moduli);

// min_J <J,a>; requires a_k > 0.
LelongValue directional_lelong_exact(const ExponentSet& su, std::span<const Rational> a);

// n! * sum over gamma atoms (t0, m) of min_J <J, -t0> * m.
LelongValue generalized_lelong_exact(const ExponentSet& su, const ExponentSet& sphi);

// Residual mass of the indicator; computed both as the generalized number
// nu(Phi, Phi) and as n! * total gamma mass, which must agree.
LelongValue newton_number(const ExponentSet& s);

// nu(log|z_k|, Phi); k is 0-based.
LelongValue tau(const ExponentSet& sphi, std::size_t k);

// Generators of y -> m^{-1} Phi(y^m); equal to Phi's own generators.
Indicator rescaled_indicator(const Indicator& phi, unsigned m);

}  // namespace lelong
