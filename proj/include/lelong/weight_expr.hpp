#pragma once

// Expression trees for pointwise evaluation of plurisubharmonic functions
// and weights on the unit polydisk.

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <variant>
#include <vector>

namespace lelong {

struct PolyTerm {
    std::complex<double> coeff;
    std::vector<int> exponent;
};

class WeightExpr {
public:
    // log|sum_J c_J z^J|
    struct PolyLog {
        std::vector<PolyTerm> terms;
    };
    struct Max {
        std::vector<WeightExpr> children;
    };
    struct Scale {
        double factor;
        std::shared_ptr<const WeightExpr> child;
    };
    // -|log|z_axis||^power
    struct NegPowLog {
        std::size_t axis;
        double power;
    };
    // log|z_axis|
    struct CoordLog {
        std::size_t axis;
    };
    using Node = std::variant<PolyLog, Max, Scale, NegPowLog, CoordLog>;

    // Combines like terms and drops zero coefficients; throws InputError if
    // nothing survives or the exponents are malformed.
    static WeightExpr poly_log(std::vector<PolyTerm> terms);
    static WeightExpr max(std::vector<WeightExpr> children);
    static WeightExpr scale(double factor, WeightExpr child);
    static WeightExpr neg_pow_log(std::size_t axis, double power);
    static WeightExpr coord_log(std::size_t axis);

    const Node& node() const noexcept { return node_; }

    // Smallest ambient dimension the tree makes sense in.
    std::size_t required_dimension() const;

private:
    explicit WeightExpr(Node node) : node_(std::move(node)) {}
    Node node_;
};

// Throws InputError unless the tree can be evaluated on C^n.
void check_dimension(const WeightExpr& w, std::size_t n);

// Evaluation at z_k = exp(log_moduli[k] + i angles[k]); log_moduli[k] may be
// -inf for z_k = 0. Working in log-moduli keeps deep tori (|z| ~ e^{-1000})
// representable.
double eval_polar(const WeightExpr& w, std::span<const double> log_moduli, std::span<const double> angles);

// Recursive evaluation at a point of the unit polydisk; may return -inf.
double eval_expr(const WeightExpr& w, std::span<const std::complex<double>> z);

// y -> m^{-1} w(y_1^m, ..., y_n^m), built at the tree level.
WeightExpr scaling_transform(const WeightExpr& w, unsigned m);

// Type-erased evaluator used by the quadrature routines, so that functions
// that are not expression trees (the Bergman approximants) can be probed
// with the same machinery.
using PolarFunction = std::function<double(std::span<const double> log_moduli, std::span<const double> angles)>;

PolarFunction as_polar(WeightExpr w);

}  // namespace lelong
