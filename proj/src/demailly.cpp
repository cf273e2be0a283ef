#include "lelong/demailly.hpp"

#include "lelong/errors.hpp"
#include "lelong/indicator.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lelong {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr unsigned kGaussOrder = 10;

struct Node {
    double s;
    double w;
    std::size_t shell;  // first depth index whose box contains the node
};

// Gauss-Legendre nodes on the unit cells of [-D_max, 0].
std::vector<Node> axis_nodes(const std::vector<double>& depths) {
    using rule = boost::math::quadrature::gauss<double, kGaussOrder>;
    std::vector<double> x, w;
    for (std::size_t i = 0; i < rule::abscissa().size(); ++i) {
        const double a = rule::abscissa()[i];
        x.push_back(a);
        w.push_back(rule::weights()[i]);
        if (a != 0.0) {
            x.push_back(-a);
            w.push_back(rule::weights()[i]);
        }
    }
    // Quarter cells on [-4, 0], where high-degree integrands e^{(2a+2)s}
    // are steep; unit cells further out.
    std::vector<std::pair<double, double>> cells;
    for (int i = 0; i < 16; ++i) cells.emplace_back(-0.25 * (i + 1), -0.25 * i);
    for (double lo = -5.0; lo >= -std::ceil(depths.back()); lo -= 1.0) cells.emplace_back(lo, lo + 1.0);
    std::vector<Node> out;
    for (const auto& [lo, hi] : cells) {
        std::size_t shell = 0;
        while (shell + 1 < depths.size() && -lo > depths[shell]) ++shell;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (std::size_t i = 0; i < x.size(); ++i) out.push_back({mid + half * x[i], half * w[i], shell});
    }
    return out;
}

void check_torus_invariance(const PolarFunction& f, std::size_t n) {
    constexpr double moduli[] = {-0.2, -1.3, -3.7};
    constexpr double angle_sets[][2] = {{0.7, -2.1}, {3.0, 1.1}, {-1.4, 2.6}, {2.2, 0.3}, {-0.5, -2.9}};
    std::vector<double> logm(n), zero(n, 0.0), ang(n);
    const std::size_t combos = n == 1 ? 3 : 9;
    for (std::size_t c = 0; c < combos; ++c) {
        logm[0] = moduli[c % 3];
        if (n == 2) logm[1] = moduli[c / 3];
        const double base = f(logm, zero);
        for (const auto& a : angle_sets) {
            for (std::size_t k = 0; k < n; ++k) ang[k] = a[k];
            const double v = f(logm, ang);
            const bool same = (v == base) || std::abs(v - base) <= 1e-9 * (1.0 + std::abs(base));
            if (!same) throw InputError("basis norms: u is not torus-invariant (its value depends on arg z_k)");
        }
    }
}

std::vector<std::vector<int>> all_alphas(std::size_t n, int cap) {
    std::vector<std::vector<int>> out;
    if (n == 1) {
        for (int a = 0; a <= cap; ++a) out.push_back({a});
    } else {
        for (int a = 0; a <= cap; ++a)
            for (int b = 0; b <= cap; ++b) out.push_back({a, b});
    }
    return out;
}

double log_sum_exp(const std::vector<double>& xs) {
    double top = kNegInf;
    for (double x : xs) top = std::max(top, x);
    if (top == kNegInf) return kNegInf;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - top);
    return top + std::log(s);
}

// 2 <alpha, log|z|> - log c_alpha per entry.
std::vector<double> term_logs(const ApproxBasis& b, std::span<const double> logm) {
    std::vector<double> t;
    t.reserve(b.entries.size());
    for (const auto& e : b.entries) {
        double v = -e.log_norm;
        for (std::size_t k = 0; k < e.alpha.size(); ++k)
            if (e.alpha[k] != 0) v += 2.0 * e.alpha[k] * logm[k];
        t.push_back(v);
    }
    return t;
}

std::vector<double> log_moduli(std::span<const std::complex<double>> z) {
    std::vector<double> l(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
        const double r = std::abs(z[k]);
        l[k] = r == 0.0 ? kNegInf : std::log(r);
    }
    return l;
}

}  // namespace

ApproxBasis basis_norms(const WeightExpr& u, std::size_t n, unsigned m, int degree_cap, const NormQuadrature& quad) {
    if (n < 1 || n > 2) throw InputError("basis norms: implemented for n <= 2");
    if (m < 1) throw InputError("basis norms: m must be positive");
    if (degree_cap < 0) throw InputError("basis norms: degree cap must be nonnegative");
    if (quad.depths.size() < 3) throw InputError("basis norms: need at least three quadrature depths");
    for (std::size_t i = 0; i < quad.depths.size(); ++i)
        if (!(quad.depths[i] >= 4.0) || quad.depths[i] != std::floor(quad.depths[i]) ||
            (i > 0 && !(quad.depths[i] > quad.depths[i - 1])))
            throw InputError("basis norms: depths must be increasing integers >= 4");
    check_dimension(u, n);
    const auto f = as_polar(u);
    check_torus_invariance(f, n);

    const auto nodes = axis_nodes(quad.depths);
    const std::size_t shells = quad.depths.size();
    // u on the product grid, evaluated once per call.
    struct GridPoint {
        double s[2];
        double w;
        double two_m_u;
        std::size_t shell;
    };
    std::vector<GridPoint> grid;
    std::vector<double> logm(n), zero(n, 0.0);
    if (n == 1) {
        for (const auto& a : nodes) {
            logm[0] = a.s;
            grid.push_back({{a.s, 0.0}, a.w, 2.0 * m * f(logm, zero), a.shell});
        }
    } else {
        grid.reserve(nodes.size() * nodes.size());
        for (const auto& a : nodes)
            for (const auto& b : nodes) {
                logm[0] = a.s;
                logm[1] = b.s;
                grid.push_back({{a.s, b.s}, a.w * b.w, 2.0 * m * f(logm, zero), std::max(a.shell, b.shell)});
            }
    }

    ApproxBasis out{m, n, degree_cap, {}, {}, u};
    const double log_torus = static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
    const auto alphas = all_alphas(n, degree_cap);
    const std::size_t side = static_cast<std::size_t>(degree_cap) + 1;
    // shell_sum[a * shells + i]; alpha is indexed a1 * side + a2 (n = 2).
    std::vector<double> shell_sum(alphas.size() * shells, 0.0);
    std::vector<bool> overflow(alphas.size(), false);
    for (const auto& g : grid) {
        // In s = log r the measure prod r^{2a+1} dr becomes prod e^{(2a+2)s} ds;
        // successive alphas differ by factors e^{2 s_k} <= 1.
        const double e0 = 2.0 * g.s[0] + (n == 2 ? 2.0 * g.s[1] : 0.0) - g.two_m_u;
        if (e0 > 700.0) {
            for (std::size_t a = 0; a < alphas.size(); ++a) {
                double e = e0 + 2.0 * alphas[a][0] * g.s[0] + (n == 2 ? 2.0 * alphas[a][1] * g.s[1] : 0.0);
                if (e > 700.0)
                    overflow[a] = true;
                else
                    shell_sum[a * shells + g.shell] += g.w * std::exp(e);
            }
            continue;
        }
        const double r0 = std::exp(2.0 * g.s[0]);
        const double r1 = n == 2 ? std::exp(2.0 * g.s[1]) : 1.0;
        double v0 = g.w * std::exp(e0);
        for (std::size_t a0 = 0; a0 < side; ++a0) {
            if (n == 1) {
                shell_sum[a0 * shells + g.shell] += v0;
            } else {
                double v = v0;
                for (std::size_t a1 = 0; a1 < side; ++a1) {
                    shell_sum[(a0 * side + a1) * shells + g.shell] += v;
                    v *= r1;
                }
            }
            v0 *= r0;
        }
    }

    for (std::size_t a = 0; a < alphas.size(); ++a) {
        bool divergent = overflow[a];
        double total = 0.0;
        if (!divergent) {
            std::vector<double> partial(shells);
            for (std::size_t i = 0; i < shells; ++i) partial[i] = (i ? partial[i - 1] : 0.0) + shell_sum[a * shells + i];
            total = partial.back();
            // Growth test on the last increments: a convergent tail shrinks,
            // a divergent one keeps growing by the depth ratio or faster.
            std::size_t growing = 0;
            for (std::size_t i = 2; i < shells; ++i) {
                const double d_prev = partial[i - 1] - partial[i - 2];
                const double d_cur = partial[i] - partial[i - 1];
                growing = (d_prev > 0.0 && d_cur >= quad.divergence_ratio * d_prev) ? growing + 1 : 0;
            }
            divergent = growing >= 2 || !std::isfinite(total) || !(total > 0.0);
        }
        if (divergent) {
            out.excluded.push_back(alphas[a]);
            continue;
        }
        const double log_norm = log_torus + std::log(total);
        out.entries.push_back({alphas[a], std::exp(log_norm), log_norm});
    }
    return out;
}

double um_eval(const ApproxBasis& b, std::span<const std::complex<double>> z) {
    if (z.size() != b.dimension) throw InputError("u_m: point has wrong dimension");
    for (const auto& x : z)
        if (!(std::abs(x) < 1.0)) throw InputError("u_m: point outside the unit polydisk");
    if (b.entries.empty()) return kNegInf;
    return log_sum_exp(term_logs(b, log_moduli(z))) / (2.0 * b.m);
}

PolarFunction approximant(const ApproxBasis& b) {
    struct Flat {
        std::size_t n;
        std::vector<double> two_alpha;  // entry-major, n per entry
        std::vector<double> log_norm;
        double inv_2m;
    };
    Flat flat{b.dimension, {}, {}, 1.0 / (2.0 * b.m)};
    for (const auto& e : b.entries) {
        for (int a : e.alpha) flat.two_alpha.push_back(2.0 * a);
        flat.log_norm.push_back(e.log_norm);
    }
    return [flat = std::move(flat)](std::span<const double> logm, std::span<const double>) {
        const std::size_t count = flat.log_norm.size();
        if (count == 0) return kNegInf;
        thread_local std::vector<double> terms;
        terms.resize(count);
        double top = kNegInf;
        for (std::size_t i = 0; i < count; ++i) {
            double v = -flat.log_norm[i];
            for (std::size_t k = 0; k < flat.n; ++k) {
                const double c = flat.two_alpha[i * flat.n + k];
                if (c != 0.0) v += c * logm[k];
            }
            terms[i] = v;
            top = std::max(top, v);
        }
        if (top == kNegInf) return kNegInf;
        double sum = 0.0;
        for (std::size_t i = 0; i < count; ++i) sum += std::exp(terms[i] - top);
        return (top + std::log(sum)) * flat.inv_2m;
    };
}

double truncation_ratio(const ApproxBasis& b, std::span<const std::complex<double>> z) {
    if (b.entries.empty()) return 0.0;
    const auto terms = term_logs(b, log_moduli(z));
    std::vector<double> top;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& a = b.entries[i].alpha;
        if (std::any_of(a.begin(), a.end(), [&](int x) { return x == b.degree_cap; })) top.push_back(terms[i]);
    }
    if (top.empty()) return 0.0;
    return std::exp(log_sum_exp(top) - log_sum_exp(terms));
}

std::vector<std::vector<std::complex<double>>> default_sandwich_samples(std::size_t n) {
    constexpr double moduli[] = {0.01, 0.03, 0.1, 0.2, 0.3, 0.5, 0.7, 0.85};
    constexpr double angles[] = {0.4, -1.9, 2.7};
    std::vector<std::vector<std::complex<double>>> out;
    std::size_t a = 0;
    if (n == 1) {
        for (double r : moduli) out.push_back({std::polar(r, angles[a++ % 3])});
    } else if (n == 2) {
        for (double r1 : moduli)
            for (double r2 : moduli) {
                out.push_back({std::polar(r1, angles[a % 3]), std::polar(r2, angles[(a + 1) % 3])});
                ++a;
            }
    } else {
        throw InputError("sandwich samples: implemented for n <= 2");
    }
    return out;
}

SandwichReport sandwich_check(const WeightExpr& u, std::size_t n, const std::vector<unsigned>& m_list, int degree_cap,
                              const std::vector<std::vector<std::complex<double>>>& samples,
                              const std::vector<double>& polyradii, double truncation_limit) {
    if (m_list.empty()) throw InputError("sandwich check: empty list of m");
    if (polyradii.size() != n) throw InputError("sandwich check: polyradius has wrong dimension");
    double log_prod_r = 0.0;
    for (double r : polyradii) {
        if (!(r > 0.0)) throw InputError("sandwich check: polyradii must be positive");
        log_prod_r += std::log(r);
    }
    for (const auto& z : samples) {
        if (z.size() != n) throw InputError("sandwich check: sample has wrong dimension");
        for (std::size_t k = 0; k < n; ++k)
            if (!(std::abs(z[k]) + polyradii[k] < 1.0))
                throw InputError("sandwich check: polydisk around a sample leaves the unit polydisk");
    }

    // sup over D_r(z) of a plurisubharmonic function sits on the
    // distinguished boundary; probe it on a grid.
    constexpr std::size_t probes = 32;
    auto sup_on_polydisk = [&](const std::vector<std::complex<double>>& z) {
        double best = kNegInf;
        std::vector<std::complex<double>> zeta(n);
        const std::size_t total = n == 1 ? probes : probes * probes;
        for (std::size_t idx = 0; idx < total; ++idx) {
            std::size_t rem = idx;
            for (std::size_t k = 0; k < n; ++k) {
                const double th = 2.0 * std::numbers::pi * static_cast<double>(rem % probes) / probes;
                rem /= probes;
                zeta[k] = z[k] + std::polar(polyradii[k], th);
            }
            best = std::max(best, eval_expr(u, zeta));
        }
        return best;
    };

    SandwichReport rep;
    for (unsigned m : m_list) {
        const auto basis = basis_norms(u, n, m, degree_cap);
        SandwichRow row;
        row.m = m;
        double c1 = kNegInf, log_c2 = kNegInf;
        for (const auto& z : samples) {
            if (truncation_ratio(basis, z) >= truncation_limit) {
                ++row.samples_truncated;
                continue;
            }
            ++row.samples_used;
            const double uz = eval_expr(u, z);
            const double um = um_eval(basis, z);
            if (uz > kNegInf) c1 = std::max(c1, m * (uz - um));
            if (um > kNegInf) log_c2 = std::max(log_c2, m * (um - sup_on_polydisk(z)) + log_prod_r);
        }
        // Both constants are positive in the statement; a negative fit means
        // the inequality holds with room to spare.
        row.c1 = std::max(c1, 0.0);
        row.c2 = std::exp(log_c2);
        rep.rows.push_back(row);
    }
    rep.finite = std::all_of(rep.rows.begin(), rep.rows.end(), [](const SandwichRow& r) {
        return r.samples_used > 0 && std::isfinite(r.c1) && std::isfinite(r.c2);
    });
    // Constants valid for every m exist iff the fitted ones do not grow; the
    // best constants may shrink as m grows, which is fine.
    auto bounded_growth = [&](auto get) {
        double hi = -INFINITY;
        for (const auto& r : rep.rows) hi = std::max(hi, get(r));
        return hi <= 2.0 * get(rep.rows.front());
    };
    // C_1 is compared after adding 1 so that constants near zero do not turn
    // round-off into instability.
    rep.stable = bounded_growth([](const SandwichRow& r) { return 1.0 + r.c1; }) &&
                 bounded_growth([](const SandwichRow& r) { return r.c2; });
    rep.pass = rep.finite && rep.stable;
    return rep;
}

BoundsReport lelong_bounds_check(const WeightExpr& u, const ExponentSet& u_support, const ExponentSet& sphi,
                                 const std::vector<unsigned>& m_list, int degree_cap, const RadialSchedule& sched,
                                 double tol) {
    const std::size_t n = sphi.dimension();
    if (u_support.dimension() != n) throw InputError("bounds check: dimension mismatch");
    if (m_list.empty()) throw InputError("bounds check: empty list of m");
    BoundsReport rep;
    rep.nu_exact = generalized_lelong_exact(u_support, sphi).value;
    rep.tau_sum = 0;
    for (std::size_t k = 0; k < n; ++k) rep.tau_sum += tau(sphi, k).value;
    const double nu = to_double(rep.nu_exact);
    const double ts = to_double(rep.tau_sum);
    rep.pass = true;
    for (unsigned m : m_list) {
        const auto basis = basis_norms(u, n, m, degree_cap);
        if (basis.entries.empty())
            throw NumericError("bounds check: no admissible monomial up to degree " + std::to_string(degree_cap) +
                               " at m = " + std::to_string(m));
        BoundsRow row;
        row.m = m;
        row.nu_m = generalized_lelong_numeric(sphi, approximant(basis), sched);
        row.lower_ok = row.nu_m.value <= nu + tol;
        row.upper_ok = nu <= row.nu_m.value + ts / m + tol;
        rep.pass = rep.pass && row.lower_ok && row.upper_ok;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace lelong
