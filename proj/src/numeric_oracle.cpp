#include "lelong/numeric_oracle.hpp"

#include "lelong/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace lelong {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Neumaier's compensated summation; fixed order in, fixed bits out.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double axis_offset(std::size_t k) {
    const double g = (k + 1) * 0.6180339887498949;
    return g - std::floor(g);
}

std::vector<double> axis_angles(std::size_t k, std::size_t nodes) {
    std::vector<double> a(nodes);
    const double d = axis_offset(k);
    for (std::size_t j = 0; j < nodes; ++j) a[j] = 2.0 * std::numbers::pi * (static_cast<double>(j) + d) / nodes;
    return a;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

// Mean over the tensor grid of angles with the moduli fixed; sum and clip
// counts accumulate into the caller's state so several tori can share one
// compensated sum.
void accumulate_torus(const PolarFunction& f, std::span<const double> logm, const std::vector<std::vector<double>>& angles,
                      double floor, double weight, CompensatedSum& sum, std::size_t& clipped, std::size_t& count) {
    const std::size_t n = logm.size();
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> ang(n);
    while (true) {
        for (std::size_t k = 0; k < n; ++k) ang[k] = angles[k][idx[k]];
        double v = f(logm, ang);
        if (!(v >= floor)) {
            v = floor;
            ++clipped;
        }
        sum.add(weight * v);
        ++count;
        std::size_t k = n;
        while (k > 0) {
            --k;
            if (++idx[k] < angles[k].size()) break;
            idx[k] = 0;
            if (k == 0) return;
        }
        if (n == 0) return;
    }
}

std::vector<std::vector<double>> all_angles(std::size_t n, std::size_t nodes) {
    std::vector<std::vector<double>> a;
    for (std::size_t k = 0; k < n; ++k) a.push_back(axis_angles(k, nodes));
    return a;
}

LimitEstimate finish(std::vector<LevelDiagnostic> diags, const RadialSchedule& sched) {
    std::vector<double> r, y;
    for (const auto& d : diags)
        if (!d.rejected) {
            r.push_back(d.r);
            y.push_back(d.ratio);
        }
    if (r.size() < 2)
        throw NumericError("fewer than two usable levels: more than " + fmt(100 * sched.max_clip_fraction) +
                           "% of nodes clipped at the floor");
    LimitEstimate out;
    std::tie(out.value, out.error) = extrapolate(r, y, sched.extrapolation);
    out.levels_used = r.size();
    out.diagnostics = std::move(diags);
    if (!std::isfinite(out.value)) throw NumericError("extrapolated value is not finite");
    return out;
}

LevelDiagnostic make_level(double r, double raw, std::size_t clipped, std::size_t nodes, const RadialSchedule& sched) {
    LevelDiagnostic d;
    d.r = r;
    d.raw = raw;
    d.ratio = raw / r;
    d.clipped = clipped;
    d.nodes = nodes;
    d.rejected = static_cast<double>(clipped) > sched.max_clip_fraction * static_cast<double>(nodes);
    return d;
}

std::vector<double> positive_direction(std::span<const double> a) {
    if (a.empty()) throw InputError("direction must be nonempty");
    for (double x : a)
        if (!(x > 0.0) || !std::isfinite(x)) throw InputError("direction coordinates must be positive");
    return {a.begin(), a.end()};
}

}  // namespace

std::string_view to_string(Extrapolation e) {
    return e == Extrapolation::richardson ? "richardson" : "last_level";
}

void RadialSchedule::validate() const {
    if (levels.size() < 2) throw InputError("schedule needs at least 2 levels");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!(levels[i] < 0.0) || !std::isfinite(levels[i])) throw InputError("schedule levels must be negative reals");
        if (i > 0 && !(levels[i] < levels[i - 1])) throw InputError("schedule levels must be strictly decreasing");
    }
    if (angular_nodes < 64) throw InputError("schedule needs at least 64 angular nodes");
    if (!(clip_floor < 0.0)) throw InputError("clip floor must be negative");
    if (!(max_clip_fraction >= 0.0 && max_clip_fraction < 1.0)) throw InputError("clip fraction must lie in [0, 1)");
    if (radial_nodes < 1) throw InputError("sphere quadrature needs at least one radial node");
}

RadialSchedule linear_schedule(double r_min, std::size_t count, std::size_t angular_nodes) {
    if (!(r_min < 0.0)) throw InputError("r_min must be negative");
    RadialSchedule s;
    s.levels.clear();
    for (std::size_t i = 1; i <= count; ++i) s.levels.push_back(r_min * static_cast<double>(i) / static_cast<double>(count));
    s.angular_nodes = angular_nodes;
    s.validate();
    return s;
}

std::pair<double, double> extrapolate(std::span<const double> r, std::span<const double> y, Extrapolation mode) {
    if (r.size() != y.size() || r.size() < 2) throw InputError("extrapolation needs at least two levels");
    const std::size_t m = r.size();
    const double spread = std::abs(y[m - 1] - y[m - 2]);
    if (mode == Extrapolation::last_level) return {y[m - 1], spread};
    // y = nu + C / |r|: least squares over the last three levels.
    const std::size_t first = m >= 3 ? m - 3 : 0;
    const double cnt = static_cast<double>(m - first);
    double sx = 0, sy = 0;
    for (std::size_t i = first; i < m; ++i) {
        sx += 1.0 / std::abs(r[i]);
        sy += y[i];
    }
    const double mx = sx / cnt, my = sy / cnt;
    double sxx = 0, sxy = 0;
    for (std::size_t i = first; i < m; ++i) {
        const double dx = 1.0 / std::abs(r[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (y[i] - my);
    }
    const double slope = sxx > 0 ? sxy / sxx : 0.0;
    return {my - slope * mx, spread};
}

PolarFunction indicator_function(const ExponentSet& s) {
    std::vector<std::vector<double>> gens;
    for (const auto& j : s.points()) gens.push_back(to_double(j));
    return [gens = std::move(gens)](std::span<const double> logm, std::span<const double>) {
        double best = kNegInf;
        for (const auto& g : gens) {
            double v = 0.0;
            for (std::size_t k = 0; k < g.size(); ++k)
                if (g[k] != 0.0) v += g[k] * logm[k];
            best = std::max(best, v);
        }
        return best;
    };
}

TorusMean torus_mean_detailed(const PolarFunction& f, std::span<const double> t, std::size_t nodes, double floor) {
    if (t.empty()) throw InputError("torus mean: empty log-radius vector");
    if (nodes < 1) throw InputError("torus mean: needs at least one node per angle");
    for (double x : t)
        if (!(x < 0.0)) throw InputError("torus mean: log-radii must be negative");
    CompensatedSum sum;
    TorusMean out;
    accumulate_torus(f, t, all_angles(t.size(), nodes), floor, 1.0, sum, out.clipped, out.nodes);
    out.value = sum.value() / static_cast<double>(out.nodes);
    return out;
}

double torus_mean(const WeightExpr& w, std::span<const double> t, std::size_t nodes) {
    check_dimension(w, t.size());
    return torus_mean_detailed(as_polar(w), t, nodes).value;
}

LimitEstimate directional_lelong_numeric(const PolarFunction& f, std::span<const double> a, const RadialSchedule& sched) {
    sched.validate();
    const auto dir = positive_direction(a);
    std::vector<LevelDiagnostic> diags;
    std::vector<double> t(dir.size());
    for (double r : sched.levels) {
        for (std::size_t k = 0; k < dir.size(); ++k) t[k] = r * dir[k];
        const auto tm = torus_mean_detailed(f, t, sched.angular_nodes, sched.clip_floor);
        if (tm.clipped == tm.nodes)
            throw NumericError("non-PSH_* probe: function is -inf at every node of the torus at r = " + fmt(r));
        diags.push_back(make_level(r, tm.value, tm.clipped, tm.nodes, sched));
    }
    return finish(std::move(diags), sched);
}

LimitEstimate directional_lelong_numeric(const WeightExpr& w, std::span<const double> a, const RadialSchedule& sched) {
    check_dimension(w, a.size());
    return directional_lelong_numeric(as_polar(w), a, sched);
}

LimitEstimate classical_lelong_numeric(const PolarFunction& f, std::size_t n, const RadialSchedule& sched) {
    sched.validate();
    if (n < 1 || n > 3) throw InputError("sphere means are implemented for n <= 3 only");
    const auto angles = all_angles(n, sched.angular_nodes);
    const std::size_t ns = sched.radial_nodes;
    std::vector<LevelDiagnostic> diags;
    std::vector<double> logm(n);
    for (double r : sched.levels) {
        CompensatedSum sum;
        std::size_t clipped = 0, count = 0;
        // (|z_k|^2 / |z|^2)_k is uniform on the simplex for z uniform on the
        // sphere; midpoint nodes in simplex coordinates, equal weights.
        if (n == 1) {
            logm[0] = r;
            accumulate_torus(f, logm, angles, sched.clip_floor, 1.0, sum, clipped, count);
        } else if (n == 2) {
            for (std::size_t i = 0; i < ns; ++i) {
                const double s = (static_cast<double>(i) + 0.5) / ns;
                logm[0] = r + 0.5 * std::log(s);
                logm[1] = r + 0.5 * std::log1p(-s);
                accumulate_torus(f, logm, angles, sched.clip_floor, 1.0, sum, clipped, count);
            }
        } else {
            for (std::size_t i = 0; i < ns; ++i)
                for (std::size_t j = 0; j < ns; ++j) {
                    const double u = (static_cast<double>(i) + 0.5) / ns;
                    const double v = (static_cast<double>(j) + 0.5) / ns;
                    const double su = std::sqrt(u);
                    logm[0] = r + 0.5 * std::log1p(-su);
                    logm[1] = r + 0.5 * std::log(su * (1.0 - v));
                    logm[2] = r + 0.5 * std::log(su * v);
                    accumulate_torus(f, logm, angles, sched.clip_floor, 1.0, sum, clipped, count);
                }
        }
        if (clipped == count) throw NumericError("non-PSH_* probe: function is -inf on the sphere at r = " + fmt(r));
        diags.push_back(make_level(r, sum.value() / static_cast<double>(count), clipped, count, sched));
    }
    auto out = finish(std::move(diags), sched);
    const std::vector<double> ones(n, 1.0);
    out.checks.emplace_back("directional_diagonal", directional_lelong_numeric(f, ones, sched).value);
    return out;
}

LimitEstimate classical_lelong_numeric(const WeightExpr& w, std::size_t n, const RadialSchedule& sched) {
    check_dimension(w, n);
    return classical_lelong_numeric(as_polar(w), n, sched);
}

double swept_measure_apply(const GammaMeasure& gamma, const PolarFunction& f, double r, std::size_t nodes, double floor,
                           std::size_t* clipped, std::size_t* evaluated) {
    if (!(r < 0.0)) throw InputError("swept measure: r must be negative");
    const std::size_t n = gamma.dimension;
    CompensatedSum sum;
    std::vector<double> t(n);
    for (const auto& atom : gamma.atoms) {
        for (std::size_t k = 0; k < n; ++k) t[k] = std::abs(r) * to_double(atom.vertex[k]);
        // Wall vertices never carry mass, so every t here is strictly negative.
        const auto tm = torus_mean_detailed(f, t, nodes, floor);
        if (clipped) *clipped += tm.clipped;
        if (evaluated) *evaluated += tm.nodes;
        sum.add(tm.value * to_double(atom.mass));
    }
    return to_double(factorial(static_cast<unsigned>(n))) * sum.value();
}

double swept_measure_apply(const ExponentSet& sphi, const WeightExpr& w, double r, std::size_t nodes) {
    check_dimension(w, sphi.dimension());
    return swept_measure_apply(gamma_measure(sphi), as_polar(w), r, nodes);
}

LimitEstimate generalized_lelong_numeric(const ExponentSet& sphi, const PolarFunction& f, const RadialSchedule& sched) {
    sched.validate();
    const auto gamma = gamma_measure(sphi);
    if (gamma.atoms.empty()) throw InputError("weight has no Monge-Ampere mass at 0 (empty gamma measure)");
    std::vector<LevelDiagnostic> diags;
    for (double r : sched.levels) {
        std::size_t clipped = 0, count = 0;
        const double mu = swept_measure_apply(gamma, f, r, sched.angular_nodes, sched.clip_floor, &clipped, &count);
        if (clipped == count) throw NumericError("non-PSH_* probe: function is -inf on every atom torus at r = " + fmt(r));
        diags.push_back(make_level(r, mu, clipped, count, sched));
    }
    return finish(std::move(diags), sched);
}

LimitEstimate generalized_lelong_numeric(const ExponentSet& sphi, const WeightExpr& w, const RadialSchedule& sched) {
    check_dimension(w, sphi.dimension());
    return generalized_lelong_numeric(sphi, as_polar(w), sched);
}

LimitEstimate slice_lelong(const PolarFunction& f, std::size_t k, const RadialSchedule& sched) {
    sched.validate();
    if (k > 1) throw InputError("slice: axis out of range (slices are implemented for n = 2)");
    const std::size_t o = 1 - k;
    const auto ang = axis_angles(o, sched.angular_nodes);
    std::vector<double> logm(2), angles(2, 0.0);
    logm[k] = kNegInf;
    std::vector<LevelDiagnostic> diags;
    for (double r : sched.levels) {
        logm[o] = r;
        CompensatedSum sum;
        std::size_t clipped = 0;
        for (double th : ang) {
            angles[o] = th;
            double v = f(logm, angles);
            if (!(v >= sched.clip_floor)) {
                v = sched.clip_floor;
                ++clipped;
            }
            sum.add(v);
        }
        if (clipped == ang.size())
            throw NumericError("slice undefined: restriction to {z_" + std::to_string(k + 1) +
                               " = 0} is identically -inf");
        diags.push_back(make_level(r, sum.value() / static_cast<double>(ang.size()), clipped, ang.size(), sched));
    }
    return finish(std::move(diags), sched);
}

LimitEstimate slice_lelong(const WeightExpr& w, std::size_t k, const RadialSchedule& sched) {
    check_dimension(w, 2);
    return slice_lelong(as_polar(w), k, sched);
}

std::vector<ProfileEntry> indicator_profile(const PolarFunction& f, const std::vector<std::vector<double>>& directions,
                                            const RadialSchedule& sched) {
    std::vector<ProfileEntry> out;
    for (const auto& a : directions) {
        ProfileEntry e;
        e.direction = a;
        try {
            e.estimate = directional_lelong_numeric(f, a, sched);
        } catch (const std::exception& ex) {
            e.error = ex.what();
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<ProfileEntry> indicator_profile(const WeightExpr& w, const std::vector<std::vector<double>>& directions,
                                            const RadialSchedule& sched) {
    for (const auto& a : directions) check_dimension(w, a.size());
    return indicator_profile(as_polar(w), directions, sched);
}

std::vector<std::size_t> psh_star_violations(const PolarFunction& f, std::size_t n) {
    constexpr double radii[] = {0.9, 0.5, 0.1, 1e-3};
    constexpr std::size_t probes = 16;
    std::vector<std::size_t> flagged;
    std::vector<double> logm(n), ang(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        std::fill(logm.begin(), logm.end(), kNegInf);
        bool finite = false;
        for (double rho : radii) {
            logm[k] = std::log(rho);
            for (std::size_t j = 0; j < probes && !finite; ++j) {
                ang[k] = 2.0 * std::numbers::pi * (static_cast<double>(j) + axis_offset(k)) / probes;
                finite = f(logm, ang) > kNegInf;
            }
        }
        if (!finite) flagged.push_back(k);
    }
    return flagged;
}

std::vector<std::size_t> psh_star_violations(const WeightExpr& w, std::size_t n) {
    check_dimension(w, n);
    return psh_star_violations(as_polar(w), n);
}

}  // namespace lelong
