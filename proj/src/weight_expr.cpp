#include "lelong/weight_expr.hpp"

#include "lelong/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace lelong {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double eval_poly_log(const WeightExpr::PolyLog& p, std::span<const double> logm, std::span<const double> ang) {
    // log|sum c_J z^J| = M + log|sum exp(e_J - M) e^{i phase_J}|, M = max e_J.
    thread_local std::vector<double> mags, phases;
    mags.resize(p.terms.size());
    phases.resize(p.terms.size());
    double top = kNegInf;
    for (std::size_t i = 0; i < p.terms.size(); ++i) {
        const auto& term = p.terms[i];
        double e = std::log(std::abs(term.coeff));
        double ph = std::arg(term.coeff);
        for (std::size_t k = 0; k < term.exponent.size(); ++k) {
            const int j = term.exponent[k];
            if (j == 0) continue;
            e += j * logm[k];
            ph += j * ang[k];
        }
        mags[i] = e;
        phases[i] = ph;
        top = std::max(top, e);
    }
    if (top == kNegInf) return kNegInf;
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < p.terms.size(); ++i) {
        if (mags[i] == kNegInf) continue;
        const double s = std::exp(mags[i] - top);
        re += s * std::cos(phases[i]);
        im += s * std::sin(phases[i]);
    }
    const double mod = std::hypot(re, im);
    return mod == 0.0 ? kNegInf : top + std::log(mod);
}

}  // namespace

WeightExpr WeightExpr::poly_log(std::vector<PolyTerm> terms) {
    if (terms.empty()) throw InputError("poly_log: polynomial has no terms");
    const auto n = terms.front().exponent.size();
    std::map<std::vector<int>, std::complex<double>> combined;
    for (const auto& t : terms) {
        if (t.exponent.size() != n) throw InputError("poly_log: exponent vectors of different lengths");
        for (int j : t.exponent)
            if (j < 0) throw InputError("poly_log: exponents must be nonnegative integers");
        if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag()))
            throw InputError("poly_log: non-finite coefficient");
        combined[t.exponent] += t.coeff;
    }
    PolyLog p;
    for (const auto& [e, c] : combined)
        if (c != std::complex<double>(0.0, 0.0)) p.terms.push_back({c, e});
    if (p.terms.empty()) throw InputError("poly_log: polynomial is identically zero");
    return WeightExpr(std::move(p));
}

WeightExpr WeightExpr::max(std::vector<WeightExpr> children) {
    if (children.empty()) throw InputError("max: needs at least one child");
    return WeightExpr(Max{std::move(children)});
}

WeightExpr WeightExpr::scale(double factor, WeightExpr child) {
    if (!(factor > 0.0) || !std::isfinite(factor)) throw InputError("scale: factor must be a positive real");
    return WeightExpr(Scale{factor, std::make_shared<const WeightExpr>(std::move(child))});
}

WeightExpr WeightExpr::neg_pow_log(std::size_t axis, double power) {
    if (!(power > 0.0 && power <= 1.0)) throw InputError("neg_pow_log: power must lie in (0, 1]");
    return WeightExpr(NegPowLog{axis, power});
}

WeightExpr WeightExpr::coord_log(std::size_t axis) { return WeightExpr(CoordLog{axis}); }

std::size_t WeightExpr::required_dimension() const {
    return std::visit(overloaded{
                          [](const PolyLog& p) { return p.terms.front().exponent.size(); },
                          [](const Max& m) {
                              std::size_t d = 0;
                              for (const auto& c : m.children) d = std::max(d, c.required_dimension());
                              return d;
                          },
                          [](const Scale& s) { return s.child->required_dimension(); },
                          [](const NegPowLog& a) { return a.axis + 1; },
                          [](const CoordLog& a) { return a.axis + 1; },
                      },
                      node_);
}

void check_dimension(const WeightExpr& w, std::size_t n) {
    std::visit(overloaded{
                   [n](const WeightExpr::PolyLog& p) {
                       if (p.terms.front().exponent.size() != n)
                           throw InputError("poly_log: exponent length " +
                                            std::to_string(p.terms.front().exponent.size()) +
                                            " does not match dimension " + std::to_string(n));
                   },
                   [n](const WeightExpr::Max& m) {
                       for (const auto& c : m.children) check_dimension(c, n);
                   },
                   [n](const WeightExpr::Scale& s) { check_dimension(*s.child, n); },
                   [n](const WeightExpr::NegPowLog& a) {
                       if (a.axis >= n) throw InputError("neg_pow_log: axis out of range");
                   },
                   [n](const WeightExpr::CoordLog& a) {
                       if (a.axis >= n) throw InputError("coord_log: axis out of range");
                   },
               },
               w.node());
}

double eval_polar(const WeightExpr& w, std::span<const double> log_moduli, std::span<const double> angles) {
    return std::visit(overloaded{
                          [&](const WeightExpr::PolyLog& p) { return eval_poly_log(p, log_moduli, angles); },
                          [&](const WeightExpr::Max& m) {
                              double best = kNegInf;
                              for (const auto& c : m.children) best = std::max(best, eval_polar(c, log_moduli, angles));
                              return best;
                          },
                          [&](const WeightExpr::Scale& s) { return s.factor * eval_polar(*s.child, log_moduli, angles); },
                          [&](const WeightExpr::NegPowLog& a) {
                              const double t = log_moduli[a.axis];
                              return t == kNegInf ? kNegInf : -std::pow(std::abs(t), a.power);
                          },
                          [&](const WeightExpr::CoordLog& a) { return log_moduli[a.axis]; },
                      },
                      w.node());
}

double eval_expr(const WeightExpr& w, std::span<const std::complex<double>> z) {
    check_dimension(w, z.size());
    std::vector<double> logm(z.size()), ang(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
        const double r = std::abs(z[k]);
        logm[k] = r == 0.0 ? kNegInf : std::log(r);
        ang[k] = std::arg(z[k]);
    }
    return eval_polar(w, logm, ang);
}

WeightExpr scaling_transform(const WeightExpr& w, unsigned m) {
    if (m == 0) throw InputError("scaling_transform: m must be positive");
    if (m == 1) return w;
    return std::visit(overloaded{
                          [&](const WeightExpr::PolyLog& p) {
                              auto terms = p.terms;
                              for (auto& t : terms)
                                  for (auto& j : t.exponent) j *= static_cast<int>(m);
                              return WeightExpr::scale(1.0 / m, WeightExpr::poly_log(std::move(terms)));
                          },
                          [&](const WeightExpr::Max& mx) {
                              std::vector<WeightExpr> kids;
                              for (const auto& c : mx.children) kids.push_back(scaling_transform(c, m));
                              return WeightExpr::max(std::move(kids));
                          },
                          [&](const WeightExpr::Scale& s) {
                              return WeightExpr::scale(s.factor, scaling_transform(*s.child, m));
                          },
                          [&](const WeightExpr::NegPowLog& a) {
                              // m^{-1} * -(m |log|y||)^p = m^{p-1} * -|log|y||^p
                              if (a.power == 1.0) return w;
                              return WeightExpr::scale(std::pow(static_cast<double>(m), a.power - 1.0), w);
                          },
                          [&](const WeightExpr::CoordLog&) { return w; },
                      },
                      w.node());
}

PolarFunction as_polar(WeightExpr w) {
    return [w = std::move(w)](std::span<const double> logm, std::span<const double> ang) { return eval_polar(w, logm, ang); };
}

}  // namespace lelong
