#pragma once

// Bergman-kernel approximation u_m = (1/2m) log sum |sigma_l|^2 for
// torus-invariant u on the unit polydisk, n <= 2. Torus invariance makes the
// monomials z^alpha an orthogonal basis, so only their weighted norms
// c_alpha are needed.

#include "lelong/numeric_oracle.hpp"
#include "lelong/poly_geom.hpp"
#include "lelong/weight_expr.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lelong {

struct NormQuadrature {
    // Integration runs over s = log|z| in [-D, 0]^n for each depth D; the
    // increments between depths decide convergence.
    std::vector<double> depths{8.0, 16.0, 32.0, 64.0};
    double divergence_ratio = 1.5;
};

struct BasisEntry {
    std::vector<int> alpha;
    double norm = 0.0;      // c_alpha
    double log_norm = 0.0;  // log c_alpha, kept to avoid overflow for large alpha
};

struct ApproxBasis {
    unsigned m = 1;
    std::size_t dimension = 1;
    int degree_cap = 0;
    std::vector<BasisEntry> entries;             // admissible alpha, lexicographic
    std::vector<std::vector<int>> excluded;      // alpha whose norm integral diverges
    WeightExpr u_ref;
};

// c_alpha = (2 pi)^n int_{[0,1]^n} prod r_k^{2 alpha_k + 1} e^{-2 m u(r)} dr
// for all alpha with alpha_k <= degree_cap. Throws InputError when u depends
// on the arguments of z_k or n > 2.
ApproxBasis basis_norms(const WeightExpr& u, std::size_t n, unsigned m, int degree_cap, const NormQuadrature& quad = {});

// (1/2m) log sum |z^alpha|^2 / c_alpha in log space; -inf for an empty basis.
double um_eval(const ApproxBasis& b, std::span<const std::complex<double>> z);
PolarFunction approximant(const ApproxBasis& b);

// Share of the sum carried by terms of top degree (some alpha_k = cap).
double truncation_ratio(const ApproxBasis& b, std::span<const std::complex<double>> z);

struct SandwichRow {
    unsigned m = 1;
    double c1 = 0.0;  // smallest C_1 with u - C_1/m <= u_m on the samples
    double c2 = 0.0;  // smallest C_2 with u_m <= sup_{D_r} u + log(C_2 / prod r) / m
    std::size_t samples_used = 0;
    std::size_t samples_truncated = 0;
};

struct SandwichReport {
    std::vector<SandwichRow> rows;
    bool finite = false;
    bool stable = false;
    bool pass = false;
};

// Samples with a top-degree share >= truncation_limit are skipped. The
// supremum over D_r(z) is taken on a grid of its distinguished boundary.
SandwichReport sandwich_check(const WeightExpr& u, std::size_t n, const std::vector<unsigned>& m_list, int degree_cap,
                              const std::vector<std::vector<std::complex<double>>>& samples,
                              const std::vector<double>& polyradii, double truncation_limit = 1e-10);

// Default probe points: moduli on a fixed ladder in (0, 0.85], fixed angles.
std::vector<std::vector<std::complex<double>>> default_sandwich_samples(std::size_t n);

struct BoundsRow {
    unsigned m = 1;
    LimitEstimate nu_m;
    bool lower_ok = false;  // nu(u_m) <= nu(u) + tol
    bool upper_ok = false;  // nu(u) <= nu(u_m) + sum tau / m + tol
};

struct BoundsReport {
    Rational nu_exact;
    Rational tau_sum;
    std::vector<BoundsRow> rows;
    bool pass = false;
};

// nu(u_m, phi) <= nu(u, phi) <= nu(u_m, phi) + sum_k tau_k(phi) / m for each
// m, with nu(u, phi) computed exactly from the exponent set of u's indicator.
BoundsReport lelong_bounds_check(const WeightExpr& u, const ExponentSet& u_support, const ExponentSet& sphi,
                                 const std::vector<unsigned>& m_list, int degree_cap, const RadialSchedule& sched,
                                 double tol = 1e-2);

}  // namespace lelong
