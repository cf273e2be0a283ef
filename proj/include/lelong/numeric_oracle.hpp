#pragma once

// Floating-point estimates of Lelong-type numbers from their mean-value
// definitions: torus and sphere means at shrinking radii, extrapolated in r.

#include "lelong/poly_geom.hpp"
#include "lelong/weight_expr.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lelong {

enum class Extrapolation { last_level, richardson };

std::string_view to_string(Extrapolation e);

struct RadialSchedule {
    std::vector<double> levels{-5.0, -10.0, -20.0, -30.0};  // strictly decreasing, negative
    std::size_t angular_nodes = 256;
    Extrapolation extrapolation = Extrapolation::richardson;
    double clip_floor = -1e6;
    double max_clip_fraction = 0.01;
    // Nodes in the simplex coordinates of the sphere quadrature.
    std::size_t radial_nodes = 32;

    void validate() const;
};

// Levels r_min * i / count for i = 1..count.
RadialSchedule linear_schedule(double r_min, std::size_t count, std::size_t angular_nodes);

struct TorusMean {
    double value = 0.0;
    std::size_t clipped = 0;
    std::size_t nodes = 0;
};

struct LevelDiagnostic {
    double r = 0.0;
    double raw = 0.0;    // mean value (or swept measure) at this level
    double ratio = 0.0;  // raw / r
    std::size_t clipped = 0;
    std::size_t nodes = 0;
    bool rejected = false;
};

struct LimitEstimate {
    double value = 0.0;
    double error = 0.0;  // |ratio_last - ratio_previous| over accepted levels
    std::size_t levels_used = 0;
    std::vector<LevelDiagnostic> diagnostics;
    // Named side checks, e.g. the directional estimate at (1,...,1) next to
    // a sphere-mean estimate.
    std::vector<std::pair<std::string, double>> checks;
};

// max_J <J, log|z|> for an exponent set with rational entries.
PolarFunction indicator_function(const ExponentSet& s);

// Tensor-product equispaced quadrature on |z_k| = e^{t_k}. Axis k uses the
// angles 2 pi (j + delta_k) / nodes with distinct irrational-like offsets
// delta_k, so no node lands exactly on the zero set of z_1 - z_2 style
// factors. Values below `floor` (including -inf) are replaced by `floor` and
// counted.
TorusMean torus_mean_detailed(const PolarFunction& f, std::span<const double> t, std::size_t nodes, double floor = -1e6);
double torus_mean(const WeightExpr& w, std::span<const double> t, std::size_t nodes);

LimitEstimate directional_lelong_numeric(const PolarFunction& f, std::span<const double> a, const RadialSchedule& sched);
LimitEstimate directional_lelong_numeric(const WeightExpr& w, std::span<const double> a, const RadialSchedule& sched);

// Sphere means over |z| = e^r, n <= 3, plus the directional estimate at
// (1,...,1) recorded under checks["directional_diagonal"].
LimitEstimate classical_lelong_numeric(const PolarFunction& f, std::size_t n, const RadialSchedule& sched);
LimitEstimate classical_lelong_numeric(const WeightExpr& w, std::size_t n, const RadialSchedule& sched);

// n! * sum over gamma atoms (t0, m) of torus_mean(f, |r| t0) * m.
double swept_measure_apply(const GammaMeasure& gamma, const PolarFunction& f, double r, std::size_t nodes,
                           double floor = -1e6, std::size_t* clipped = nullptr, std::size_t* evaluated = nullptr);
double swept_measure_apply(const ExponentSet& sphi, const WeightExpr& w, double r, std::size_t nodes);

LimitEstimate generalized_lelong_numeric(const ExponentSet& sphi, const PolarFunction& f, const RadialSchedule& sched);
LimitEstimate generalized_lelong_numeric(const ExponentSet& sphi, const WeightExpr& w, const RadialSchedule& sched);

// Riesz mass at 0 of w restricted to {z_k = 0}, n = 2, k 0-based. Throws
// NumericError when the restriction is identically -inf.
LimitEstimate slice_lelong(const PolarFunction& f, std::size_t k, const RadialSchedule& sched);
LimitEstimate slice_lelong(const WeightExpr& w, std::size_t k, const RadialSchedule& sched);

struct ProfileEntry {
    std::vector<double> direction;
    LimitEstimate estimate;
    std::string error;  // non-empty when the estimate could not be produced
};

std::vector<ProfileEntry> indicator_profile(const PolarFunction& f, const std::vector<std::vector<double>>& directions,
                                            const RadialSchedule& sched);
std::vector<ProfileEntry> indicator_profile(const WeightExpr& w, const std::vector<std::vector<double>>& directions,
                                            const RadialSchedule& sched);

// Axes k (0-based) along whose coordinate line {z_j = 0, j != k} the
// function is identically -inf on a probe grid.
std::vector<std::size_t> psh_star_violations(const PolarFunction& f, std::size_t n);
std::vector<std::size_t> psh_star_violations(const WeightExpr& w, std::size_t n);

// Extrapolates ratios y_i measured at levels r_i per `mode`; exposed for tests.
std::pair<double, double> extrapolate(std::span<const double> r, std::span<const double> y, Extrapolation mode);

}  // namespace lelong
