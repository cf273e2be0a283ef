#include "lelong/problem.hpp"

#include "lelong/demailly.hpp"
#include "lelong/indicator.hpp"
#include "lelong/numeric_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

namespace lelong::cli {

namespace {

[[noreturn]] void fail(const std::string& ptr, const std::string& msg) {
    throw ProblemError((ptr.empty() ? std::string("/") : ptr) + ": " + msg);
}

std::string child(const std::string& ptr, std::string_view key) {
    std::string out = ptr + '/';
    for (char c : key) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out += c;
    }
    return out;
}

std::string child(const std::string& ptr, std::size_t i) { return ptr + '/' + std::to_string(i); }

void check_keys(const Json& j, const std::string& ptr, const std::vector<std::string_view>& required,
                const std::vector<std::string_view>& optional) {
    if (!j.is_object()) fail(ptr, std::string("expected an object, got ") + j.type_name());
    for (const auto& [k, v] : j.items()) {
        const bool known = std::find(required.begin(), required.end(), k) != required.end() ||
                           std::find(optional.begin(), optional.end(), k) != optional.end();
        if (!known) fail(child(ptr, k), "unknown key '" + k + "'");
    }
    for (auto k : required)
        if (!j.contains(k)) fail(ptr, "missing required key '" + std::string(k) + "'");
}

Rational read_rational(const Json& j, const std::string& ptr) {
    try {
        if (j.is_number_integer()) return Rational(j.get<long long>());
        if (j.is_string()) return parse_rational(j.get<std::string>());
        if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
            const auto den = j[1].get<long long>();
            if (den == 0) fail(ptr, "zero denominator");
            return Rational(j[0].get<long long>(), den);
        }
    } catch (const ProblemError&) {
        throw;
    } catch (const std::exception& e) {
        fail(ptr, e.what());
    }
    fail(ptr, "expected a rational: integer, \"p/q\" or [num, den]");
}

double read_real(const Json& j, const std::string& ptr) {
    if (j.is_number()) return j.get<double>();
    return to_double(read_rational(j, ptr));
}

long long read_int(const Json& j, const std::string& ptr) {
    if (!j.is_number_integer()) fail(ptr, std::string("expected an integer, got ") + j.type_name());
    return j.get<long long>();
}

unsigned read_positive(const Json& j, const std::string& ptr) {
    const auto v = read_int(j, ptr);
    if (v < 1 || v > 1'000'000) fail(ptr, "expected a positive integer");
    return static_cast<unsigned>(v);
}

// 1-based in the file, 0-based in memory.
std::size_t read_axis(const Json& j, const std::string& ptr, std::size_t n) {
    const auto v = read_int(j, ptr);
    if (v < 1 || static_cast<std::size_t>(v) > n) fail(ptr, "axis must lie in 1.." + std::to_string(n));
    return static_cast<std::size_t>(v - 1);
}

const Json& read_array(const Json& j, const std::string& ptr, std::optional<std::size_t> size = std::nullopt) {
    if (!j.is_array()) fail(ptr, std::string("expected an array, got ") + j.type_name());
    if (size && j.size() != *size)
        fail(ptr, "dimension mismatch: expected " + std::to_string(*size) + " entries, got " + std::to_string(j.size()));
    return j;
}

QVector read_qvector(const Json& j, const std::string& ptr, std::size_t n) {
    read_array(j, ptr, n);
    QVector v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(read_rational(j[i], child(ptr, i)));
    return v;
}

std::vector<QVector> read_qvectors(const Json& j, const std::string& ptr, std::size_t n) {
    read_array(j, ptr);
    std::vector<QVector> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_qvector(j[i], child(ptr, i), n));
    return out;
}

std::vector<double> read_dvector(const Json& j, const std::string& ptr, std::size_t n) {
    read_array(j, ptr, n);
    std::vector<double> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(read_real(j[i], child(ptr, i)));
    return v;
}

std::vector<int> read_ivector(const Json& j, const std::string& ptr, std::size_t n) {
    read_array(j, ptr, n);
    std::vector<int> v;
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = read_int(j[i], child(ptr, i));
        if (x < 0 || x > 1'000'000) fail(child(ptr, i), "exponents must be nonnegative integers");
        v.push_back(static_cast<int>(x));
    }
    return v;
}

std::complex<double> read_complex(const Json& j, const std::string& ptr) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    fail(ptr, "expected a complex number [re, im] or a real number");
}

std::vector<std::complex<double>> read_cvector(const Json& j, const std::string& ptr, std::size_t n) {
    read_array(j, ptr, n);
    std::vector<std::complex<double>> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(read_complex(j[i], child(ptr, i)));
    return v;
}

template <class F>
auto located(const std::string& ptr, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ProblemError&) {
        throw;
    } catch (const InputError& e) {
        fail(ptr, e.what());
    }
}

double round12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

std::vector<PolyTerm> read_terms(const Json& j, const std::string& ptr, std::size_t n) {
    read_array(j, ptr);
    std::vector<PolyTerm> terms;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto p = child(ptr, i);
        check_keys(j[i], p, {"coeff", "exponent"}, {});
        terms.push_back({read_complex(j[i]["coeff"], child(p, "coeff")), read_ivector(j[i]["exponent"], child(p, "exponent"), n)});
    }
    return terms;
}

// Support of log|sum c_J z^J| when no term is constant.
std::optional<ExponentSet> poly_support(const WeightExpr& w, std::size_t n) {
    const auto* p = std::get_if<WeightExpr::PolyLog>(&w.node());
    if (!p) return std::nullopt;
    std::vector<QVector> pts;
    for (const auto& t : p->terms) {
        if (std::all_of(t.exponent.begin(), t.exponent.end(), [](int e) { return e == 0; })) return std::nullopt;
        QVector q;
        for (int e : t.exponent) q.emplace_back(e);
        pts.push_back(std::move(q));
    }
    return ExponentSet(n, std::move(pts));
}

// max_J <J, log|z|> as a tree: each generator J = e/d becomes (1/d) log|z^e|.
WeightExpr monomial_expr(const ExponentSet& s) {
    std::vector<WeightExpr> parts;
    for (const auto& j : s.points()) {
        Integer d = 1;
        for (const auto& x : j) d = boost::multiprecision::lcm(d, Integer(denominator(x)));
        std::vector<int> e;
        for (const auto& x : j) {
            const Rational scaled = x * Rational(d);
            if (scaled > 1'000'000) throw InputError("exponent " + to_string(j) + " is too large to evaluate");
            e.push_back(static_cast<int>(numerator(scaled).convert_to<long long>()));
        }
        if (d > 1'000'000) throw InputError("exponent " + to_string(j) + " has too large a denominator to evaluate");
        auto term = WeightExpr::poly_log({{1.0, e}});
        parts.push_back(d == 1 ? term : WeightExpr::scale(1.0 / d.convert_to<double>(), term));
    }
    return parts.size() == 1 ? parts.front() : WeightExpr::max(std::move(parts));
}

struct ScheduleSpec {
    std::optional<std::vector<double>> levels;
    std::optional<std::size_t> nodes;
    std::optional<Extrapolation> extrapolation;
    std::optional<double> clip_floor;
    std::optional<double> max_clip_fraction;
    std::optional<std::size_t> radial_nodes;
};

ScheduleSpec read_schedule(const Json& j, const std::string& ptr) {
    check_keys(j, ptr, {}, {"levels", "nodes", "extrapolation", "clip_floor", "max_clip_fraction", "radial_nodes"});
    ScheduleSpec s;
    if (j.contains("levels")) {
        const auto p = child(ptr, "levels");
        read_array(j["levels"], p);
        s.levels = read_dvector(j["levels"], p, j["levels"].size());
    }
    if (j.contains("nodes")) s.nodes = read_positive(j["nodes"], child(ptr, "nodes"));
    if (j.contains("radial_nodes")) s.radial_nodes = read_positive(j["radial_nodes"], child(ptr, "radial_nodes"));
    if (j.contains("clip_floor")) s.clip_floor = read_real(j["clip_floor"], child(ptr, "clip_floor"));
    if (j.contains("max_clip_fraction"))
        s.max_clip_fraction = read_real(j["max_clip_fraction"], child(ptr, "max_clip_fraction"));
    if (j.contains("extrapolation")) {
        const auto& e = j["extrapolation"];
        if (e == "richardson") s.extrapolation = Extrapolation::richardson;
        else if (e == "last_level") s.extrapolation = Extrapolation::last_level;
        else fail(child(ptr, "extrapolation"), "expected \"richardson\" or \"last_level\"");
    }
    RadialSchedule probe;
    if (s.levels) probe.levels = *s.levels;
    if (s.nodes) probe.angular_nodes = *s.nodes;
    located(ptr, [&] {
        probe.validate();
        return 0;
    });
    return s;
}

RadialSchedule resolve(const ScheduleSpec& s, const RunOptions& o) {
    RadialSchedule r;
    if (s.levels) r.levels = *s.levels;
    if (s.nodes) r.angular_nodes = *s.nodes;
    if (s.extrapolation) r.extrapolation = *s.extrapolation;
    if (s.clip_floor) r.clip_floor = *s.clip_floor;
    if (s.max_clip_fraction) r.max_clip_fraction = *s.max_clip_fraction;
    if (s.radial_nodes) r.radial_nodes = *s.radial_nodes;
    if (o.rmin || o.levels) r.levels = linear_schedule(o.rmin.value_or(-30.0), o.levels.value_or(4), r.angular_nodes).levels;
    if (o.nodes) r.angular_nodes = *o.nodes;
    r.validate();
    return r;
}

Json schedule_json(const RadialSchedule& s) {
    Json levels = Json::array();
    for (double l : s.levels) levels.push_back(round12(l));
    return {{"levels", levels},
            {"nodes", s.angular_nodes},
            {"extrapolation", std::string(to_string(s.extrapolation))},
            {"clip_floor", round12(s.clip_floor)},
            {"max_clip_fraction", round12(s.max_clip_fraction)},
            {"radial_nodes", s.radial_nodes},
            {"seed", "none"}};
}

std::size_t nodes_for(std::optional<std::size_t> own, const RunOptions& o) {
    if (o.nodes) return *o.nodes;
    return own.value_or(RadialSchedule{}.angular_nodes);
}

std::vector<std::string> axis_names(std::string_view prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t k = 1; k <= n; ++k) out.push_back(std::string(prefix) + std::to_string(k));
    return out;
}

std::vector<Cell> row_of(const QVector& v) { return {v.begin(), v.end()}; }

Table vector_table(std::string name, std::string_view prefix, std::size_t n, const std::vector<QVector>& vs) {
    Table t{std::move(name), axis_names(prefix, n), {}};
    for (const auto& v : vs) t.rows.push_back(row_of(v));
    return t;
}

std::string vec_text(const QVector& v) { return to_string(std::span<const Rational>(v)); }

void check_exact(TaskRecord& rec, const Rational& got, const std::optional<Rational>& want) {
    if (!want) return;
    rec.check = Check{got == *want, "expected " + to_string(*want) + ", got " + to_string(got)};
}

void check_real(TaskRecord& rec, double got, const std::optional<double>& want, double tol) {
    if (!want) return;
    const bool pass = std::isfinite(got) ? std::abs(got - *want) <= tol * std::max(1.0, std::abs(*want))
                                         : got == *want;
    rec.check = Check{pass, "expected " + format_real(*want) + " within " + format_real(tol) + " (relative above 1), got " +
                                format_real(got)};
}

void check_vectors(TaskRecord& rec, std::vector<QVector> got, const std::optional<std::vector<QVector>>& want) {
    if (!want) return;
    auto w = *want;
    const auto less = [](const QVector& a, const QVector& b) { return lex_compare(a, b) < 0; };
    std::sort(got.begin(), got.end(), less);
    std::sort(w.begin(), w.end(), less);
    std::string detail = "expected {";
    for (std::size_t i = 0; i < w.size(); ++i) detail += (i ? ", " : "") + vec_text(w[i]);
    detail += "}";
    rec.check = Check{got == w, detail};
}

// Inputs shared by every op, plus the reference helpers.
class TaskContext {
public:
    TaskContext(const ProblemFile& p, const Json& task, std::string ptr) : p_(p), task_(task), ptr_(std::move(ptr)) {}

    std::size_t n() const { return p_.dimension; }
    bool has(std::string_view k) const { return task_.contains(k); }
    const Json& at(std::string_view k) const { return task_[std::string(k)]; }
    std::string ptr(std::string_view k) const { return child(ptr_, k); }

    const ProblemObject& object(std::string_view k) const {
        const auto& j = at(k);
        if (!j.is_string()) fail(ptr(k), "expected an object name");
        const auto name = j.get<std::string>();
        const auto it = p_.objects.find(name);
        if (it == p_.objects.end()) fail(ptr(k), "unresolved reference '" + name + "'");
        return it->second;
    }
    ExponentSet exponents(std::string_view k) const {
        const auto& o = object(k);
        if (!o.exponents)
            fail(ptr(k), "object '" + o.name +
                             "' has no exponent set (needs a monomial_weight or a polynomial without constant term)");
        return *o.exponents;
    }
    WeightExpr expr(std::string_view k) const {
        auto w = object(k).expr;
        if (has("transform_m")) w = scaling_transform(w, read_positive(at("transform_m"), ptr("transform_m")));
        return w;
    }
    ScheduleSpec schedule() const { return has("schedule") ? read_schedule(at("schedule"), ptr("schedule")) : ScheduleSpec{}; }
    std::optional<double> tol() const {
        if (!has("tol")) return std::nullopt;
        const double t = read_real(at("tol"), ptr("tol"));
        if (!(t >= 0)) fail(ptr("tol"), "tolerance must be nonnegative");
        return t;
    }
    std::optional<Rational> expect_rational() const {
        return has("expect") ? std::optional(read_rational(at("expect"), ptr("expect"))) : std::nullopt;
    }
    std::optional<double> expect_real() const {
        if (!has("expect")) return std::nullopt;
        const auto& e = at("expect");
        if (e == "-inf") return -std::numeric_limits<double>::infinity();
        return read_real(e, ptr("expect"));
    }
    std::optional<std::vector<QVector>> expect_vectors() const {
        return has("expect") ? std::optional(read_qvectors(at("expect"), ptr("expect"), n())) : std::nullopt;
    }
    unsigned positive(std::string_view k) const { return read_positive(at(k), ptr(k)); }
    std::vector<unsigned> m_list() const {
        const auto& j = read_array(at("m_list"), ptr("m_list"));
        if (j.empty()) fail(ptr("m_list"), "needs at least one level m");
        std::vector<unsigned> out;
        for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_positive(j[i], child(ptr("m_list"), i)));
        return out;
    }
    int degree_cap() const {
        if (has("N")) return static_cast<int>(read_positive(at("N"), ptr("N")));
        return n() == 1 ? 12 : 8;
    }

private:
    const ProblemFile& p_;
    const Json& task_;
    std::string ptr_;
};

double tol_or(const std::optional<double>& t, const RunOptions& o) { return t.value_or(o.tol); }

void put_estimate(TaskRecord& rec, const LimitEstimate& e, const RadialSchedule& s) {
    rec.set("value", Estimate{e.value, e.error});
    rec.set("levels_used", static_cast<long long>(e.levels_used));
    for (const auto& [k, v] : e.checks) rec.set(k, v);
    Table t{"levels", {"r", "raw", "ratio", "clipped", "nodes", "rejected"}, {}};
    for (const auto& d : e.diagnostics)
        t.rows.push_back({d.r, d.raw, d.ratio, static_cast<long long>(d.clipped), static_cast<long long>(d.nodes), d.rejected});
    rec.tables.push_back(std::move(t));
    rec.config = schedule_json(s);
}

void put_lelong(TaskRecord& rec, const LelongValue& v, const std::optional<Rational>& expect) {
    rec.set("value", v.value);
    rec.set("kind", std::string(to_string(v.kind)));
    check_exact(rec, v.value, expect);
}

using Prepare = TaskRunner (*)(const TaskContext&);

struct OpDef {
    std::string_view name;
    std::vector<std::string_view> required;
    std::vector<std::string_view> optional;
    bool numeric;
    Prepare prepare;
};

TaskRunner prep_dominated_hull(const TaskContext& c) {
    auto s = c.exponents("phi");
    auto want = c.expect_vectors();
    return [s, want](TaskRecord& rec, const RunOptions&) {
        const auto d = dominated_hull(s);
        const auto n = s.dimension();
        rec.set("hull_vertices", static_cast<long long>(d.hull_vertices.size()));
        rec.set("bounded_faces", static_cast<long long>(d.bounded_faces.size()));
        rec.set("facets", static_cast<long long>(d.facets.size()));
        rec.tables.push_back(vector_table("hull_vertices", "a", n, d.hull_vertices));
        Table faces{"bounded_faces", axis_names("t", n), {}};
        faces.columns.push_back("vertices");
        for (const auto& f : d.bounded_faces) {
            auto row = row_of(f.dual_point);
            std::string vs;
            for (const auto& v : f.vertices) vs += (vs.empty() ? "" : " ") + vec_text(v);
            row.emplace_back(vs);
            faces.rows.push_back(std::move(row));
        }
        rec.tables.push_back(std::move(faces));
        check_vectors(rec, d.hull_vertices, want);
    };
}

TaskRunner prep_sublevel_vertices(const TaskContext& c) {
    auto s = c.exponents("phi");
    auto want = c.expect_vectors();
    return [s, want](TaskRecord& rec, const RunOptions&) {
        const auto sub = sublevel_vertices(s);
        rec.set("extreme_points", static_cast<long long>(sub.extreme_points.size()));
        rec.tables.push_back(vector_table("extreme_points", "t", s.dimension(), sub.extreme_points));
        check_vectors(rec, sub.extreme_points, want);
    };
}

TaskRunner prep_dual_face(const TaskContext& c) {
    auto s = c.exponents("phi");
    auto t0 = read_qvector(c.at("t0"), c.ptr("t0"), c.n());
    auto want = c.expect_vectors();
    return [s, t0, want](TaskRecord& rec, const RunOptions&) {
        const auto face = dual_face(s, t0);
        rec.set("face_vertices", static_cast<long long>(face.size()));
        rec.tables.push_back(vector_table("face", "a", s.dimension(), face));
        check_vectors(rec, face, want);
    };
}

TaskRunner prep_cone_volume(const TaskContext& c) {
    auto vs = read_qvectors(c.at("vertices"), c.ptr("vertices"), c.n());
    auto want = c.expect_rational();
    return [vs, want, n = c.n()](TaskRecord& rec, const RunOptions&) {
        const auto v = cone_volume(vs, n);
        rec.set("value", v);
        check_exact(rec, v, want);
    };
}

TaskRunner prep_gamma_measure(const TaskContext& c) {
    auto s = c.exponents("phi");
    std::optional<std::vector<std::pair<QVector, Rational>>> want;
    if (c.has("expect")) {
        const auto p = c.ptr("expect");
        const auto& e = read_array(c.at("expect"), p);
        want.emplace();
        for (std::size_t i = 0; i < e.size(); ++i) {
            const auto pi = child(p, i);
            read_array(e[i], pi, 2);
            want->emplace_back(read_qvector(e[i][0], child(pi, 0), c.n()), read_rational(e[i][1], child(pi, 1)));
        }
    }
    return [s, want](TaskRecord& rec, const RunOptions&) {
        const auto g = gamma_measure(s);
        rec.set("atoms", static_cast<long long>(g.atoms.size()));
        rec.set("total_mass", g.total_mass);
        auto cols = axis_names("t", g.dimension);
        cols.push_back("mass_num");
        cols.push_back("mass_den");
        Table t{"atoms", cols, {}};
        for (const auto& a : g.atoms) {
            auto row = row_of(a.vertex);
            row.emplace_back(Rational(numerator(a.mass)));
            row.emplace_back(Rational(denominator(a.mass)));
            t.rows.push_back(std::move(row));
        }
        rec.tables.push_back(std::move(t));
        if (want) {
            auto w = *want;
            std::vector<std::pair<QVector, Rational>> got;
            for (const auto& a : g.atoms) got.emplace_back(a.vertex, a.mass);
            const auto less = [](const auto& a, const auto& b) { return lex_compare(a.first, b.first) < 0; };
            std::sort(w.begin(), w.end(), less);
            std::sort(got.begin(), got.end(), less);
            std::string detail = "expected {";
            for (std::size_t i = 0; i < w.size(); ++i)
                detail += (i ? ", " : "") + vec_text(w[i].first) + ": " + to_string(w[i].second);
            rec.check = Check{got == w, detail + "}"};
        }
    };
}

TaskRunner prep_theta_volume(const TaskContext& c) {
    auto s = c.exponents("phi");
    auto want = c.expect_rational();
    return [s, want](TaskRecord& rec, const RunOptions&) {
        const auto v = theta_volume(dominated_hull(s));
        rec.set("value", v);
        check_exact(rec, v, want);
    };
}

TaskRunner prep_indicator_eval(const TaskContext& c) {
    auto phi = Indicator(c.exponents("phi"));
    auto y = read_cvector(c.at("y"), c.ptr("y"), c.n());
    auto want = c.expect_real();
    auto tol = c.tol();
    return [phi, y, want, tol](TaskRecord& rec, const RunOptions&) {
        const double v = indicator_eval(phi, y);
        rec.set("value", v);
        check_real(rec, v, want, tol.value_or(1e-9));
    };
}

TaskRunner prep_directional_exact(const TaskContext& c) {
    auto s = c.exponents("u");
    auto a = read_qvector(c.at("a"), c.ptr("a"), c.n());
    auto want = c.expect_rational();
    return [s, a, want](TaskRecord& rec, const RunOptions&) { put_lelong(rec, directional_lelong_exact(s, a), want); };
}

TaskRunner prep_generalized_exact(const TaskContext& c) {
    auto su = c.exponents("u");
    auto sphi = c.exponents("phi");
    auto want = c.expect_rational();
    return [su, sphi, want](TaskRecord& rec, const RunOptions&) { put_lelong(rec, generalized_lelong_exact(su, sphi), want); };
}

TaskRunner prep_newton_number(const TaskContext& c) {
    auto s = c.exponents("phi");
    auto want = c.expect_rational();
    return [s, want](TaskRecord& rec, const RunOptions&) { put_lelong(rec, newton_number(s), want); };
}

TaskRunner prep_tau(const TaskContext& c) {
    auto s = c.exponents("phi");
    const auto k = read_axis(c.at("k"), c.ptr("k"), c.n());
    auto want = c.expect_rational();
    return [s, k, want](TaskRecord& rec, const RunOptions&) {
        const auto v = tau(s, k);
        put_lelong(rec, v, want);
        rec.set("wall_contact", v.wall_contact);
    };
}

TaskRunner prep_rescaled_indicator(const TaskContext& c) {
    auto phi = Indicator(c.exponents("phi"));
    const auto m = c.positive("m");
    auto want = c.expect_vectors();
    return [phi, m, want](TaskRecord& rec, const RunOptions&) {
        const auto r = rescaled_indicator(phi, m);
        rec.set("generators", static_cast<long long>(r.generators().size()));
        rec.tables.push_back(vector_table("generators", "a", r.dimension(), r.generators().points()));
        check_vectors(rec, r.generators().points(), want);
    };
}

TaskRunner prep_eval_expr(const TaskContext& c) {
    auto w = c.expr("w");
    auto z = read_cvector(c.at("z"), c.ptr("z"), c.n());
    auto want = c.expect_real();
    auto tol = c.tol();
    return [w, z, want, tol](TaskRecord& rec, const RunOptions&) {
        const double v = eval_expr(w, z);
        rec.set("value", v);
        check_real(rec, v, want, tol.value_or(1e-9));
    };
}

TaskRunner prep_torus_mean(const TaskContext& c) {
    auto w = c.expr("w");
    auto t = read_dvector(c.at("t"), c.ptr("t"), c.n());
    std::optional<std::size_t> nodes;
    if (c.has("nodes")) nodes = c.positive("nodes");
    auto want = c.expect_real();
    auto tol = c.tol();
    return [w, t, nodes, want, tol](TaskRecord& rec, const RunOptions& o) {
        const auto k = nodes_for(nodes, o);
        const auto m = torus_mean_detailed(as_polar(w), t, k);
        rec.set("value", m.value);
        rec.set("clipped", static_cast<long long>(m.clipped));
        rec.config = {{"nodes", k}, {"seed", "none"}};
        check_real(rec, m.value, want, tol_or(tol, o));
    };
}

TaskRunner prep_directional_numeric(const TaskContext& c) {
    auto w = c.expr("w");
    auto a = read_dvector(c.at("a"), c.ptr("a"), c.n());
    auto sched = c.schedule();
    auto want = c.expect_real();
    auto tol = c.tol();
    return [w, a, sched, want, tol](TaskRecord& rec, const RunOptions& o) {
        const auto s = resolve(sched, o);
        const auto e = directional_lelong_numeric(w, a, s);
        put_estimate(rec, e, s);
        check_real(rec, e.value, want, tol_or(tol, o));
    };
}

TaskRunner prep_classical_numeric(const TaskContext& c) {
    auto w = c.expr("w");
    auto sched = c.schedule();
    auto want = c.expect_real();
    auto tol = c.tol();
    return [w, sched, want, tol, n = c.n()](TaskRecord& rec, const RunOptions& o) {
        const auto s = resolve(sched, o);
        const auto e = classical_lelong_numeric(w, n, s);
        put_estimate(rec, e, s);
        check_real(rec, e.value, want, tol_or(tol, o));
    };
}

TaskRunner prep_swept_measure(const TaskContext& c) {
    auto s = c.exponents("phi");
    auto w = c.expr("w");
    const double r = read_real(c.at("r"), c.ptr("r"));
    if (!(r < 0)) fail(c.ptr("r"), "radius level r must be negative");
    std::optional<std::size_t> nodes;
    if (c.has("nodes")) nodes = c.positive("nodes");
    auto want = c.expect_real();
    auto tol = c.tol();
    return [s, w, r, nodes, want, tol](TaskRecord& rec, const RunOptions& o) {
        const auto k = nodes_for(nodes, o);
        const double v = swept_measure_apply(s, w, r, k);
        rec.set("value", v);
        rec.set("ratio", v / r);
        rec.config = {{"nodes", k}, {"r", round12(r)}, {"seed", "none"}};
        check_real(rec, v, want, tol_or(tol, o));
    };
}

TaskRunner prep_generalized_numeric(const TaskContext& c) {
    auto s = c.exponents("phi");
    auto w = c.expr("w");
    auto sched = c.schedule();
    auto want = c.expect_real();
    auto tol = c.tol();
    return [s, w, sched, want, tol](TaskRecord& rec, const RunOptions& o) {
        const auto rs = resolve(sched, o);
        const auto e = generalized_lelong_numeric(s, w, rs);
        put_estimate(rec, e, rs);
        check_real(rec, e.value, want, tol_or(tol, o));
    };
}

TaskRunner prep_slice(const TaskContext& c) {
    auto w = c.expr("w");
    const auto k = read_axis(c.at("k"), c.ptr("k"), c.n());
    auto sched = c.schedule();
    auto want = c.expect_real();
    auto tol = c.tol();
    return [w, k, sched, want, tol](TaskRecord& rec, const RunOptions& o) {
        const auto s = resolve(sched, o);
        const auto e = slice_lelong(w, k, s);
        put_estimate(rec, e, s);
        check_real(rec, e.value, want, tol_or(tol, o));
    };
}

TaskRunner prep_scaling_transform(const TaskContext& c) {
    auto w = c.object("w").expr;
    const auto m = c.positive("m");
    std::optional<Json> want;
    if (c.has("expect")) want = expr_to_json(expr_from_json(c.at("expect"), c.n(), c.ptr("expect")));
    return [w, m, want](TaskRecord& rec, const RunOptions&) {
        const auto got = expr_to_json(scaling_transform(w, m));
        rec.set("expr", got);
        if (want) rec.check = Check{got == *want, "expected " + want->dump()};
    };
}

TaskRunner prep_profile(const TaskContext& c) {
    auto w = c.expr("w");
    const auto p = c.ptr("directions");
    const auto& dj = read_array(c.at("directions"), p);
    std::vector<std::vector<double>> dirs;
    for (std::size_t i = 0; i < dj.size(); ++i) dirs.push_back(read_dvector(dj[i], child(p, i), c.n()));
    auto sched = c.schedule();
    std::optional<std::vector<double>> want;
    if (c.has("expect")) want = read_dvector(c.at("expect"), c.ptr("expect"), dirs.size());
    auto tol = c.tol();
    return [w, dirs, sched, want, tol, n = c.n()](TaskRecord& rec, const RunOptions& o) {
        const auto s = resolve(sched, o);
        const auto prof = indicator_profile(w, dirs, s);
        auto cols = axis_names("a", n);
        for (const char* k : {"nu", "error", "status"}) cols.emplace_back(k);
        Table t{"profile", cols, {}};
        bool pass = true;
        double worst = 0.0;
        for (std::size_t i = 0; i < prof.size(); ++i) {
            const auto& e = prof[i];
            std::vector<Cell> row(e.direction.begin(), e.direction.end());
            if (e.error.empty()) {
                row.insert(row.end(), {e.estimate.value, e.estimate.error, std::string("ok")});
            } else {
                row.insert(row.end(), {std::monostate{}, std::monostate{}, e.error});
            }
            t.rows.push_back(std::move(row));
            if (want) {
                const double dev = e.error.empty() ? std::abs(e.estimate.value - (*want)[i]) : INFINITY;
                worst = std::max(worst, dev);
                pass = pass && dev <= tol_or(tol, o) * std::max(1.0, std::abs((*want)[i]));
            }
        }
        rec.set("directions", static_cast<long long>(prof.size()));
        rec.tables.push_back(std::move(t));
        rec.config = schedule_json(s);
        if (want) rec.check = Check{pass, "largest deviation " + format_real(worst) + ", tolerance " + format_real(tol_or(tol, o))};
    };
}

TaskRunner prep_psh_star(const TaskContext& c) {
    auto w = c.expr("w");
    std::optional<bool> want;
    if (c.has("expect")) {
        if (!c.at("expect").is_boolean()) fail(c.ptr("expect"), "expected true or false");
        want = c.at("expect").get<bool>();
    }
    return [w, want, n = c.n()](TaskRecord& rec, const RunOptions&) {
        const auto v = psh_star_violations(w, n);
        std::string axes;
        for (auto k : v) axes += (axes.empty() ? "" : " ") + std::to_string(k + 1);
        rec.set("psh_star", v.empty());
        rec.set("violating_axes", axes.empty() ? std::string("none") : axes);
        if (want) rec.check = Check{v.empty() == *want, std::string("expected psh_star ") + (*want ? "true" : "false")};
    };
}

std::vector<Cell> alpha_row(const std::vector<int>& a) {
    std::vector<Cell> row;
    for (int x : a) row.emplace_back(static_cast<long long>(x));
    return row;
}

TaskRunner prep_basis_norms(const TaskContext& c) {
    auto u = c.expr("u");
    const auto m = c.positive("m");
    const auto cap = c.degree_cap();
    std::optional<std::vector<std::vector<int>>> want;
    if (c.has("expect")) {
        const auto p = c.ptr("expect");
        const auto& e = read_array(c.at("expect"), p);
        want.emplace();
        for (std::size_t i = 0; i < e.size(); ++i) want->push_back(read_ivector(e[i], child(p, i), c.n()));
    }
    return [u, m, cap, want, n = c.n()](TaskRecord& rec, const RunOptions&) {
        const auto b = basis_norms(u, n, m, cap);
        rec.set("admissible", static_cast<long long>(b.entries.size()));
        rec.set("excluded", static_cast<long long>(b.excluded.size()));
        auto cols = axis_names("alpha", n);
        cols.emplace_back("c_alpha");
        cols.emplace_back("log_c_alpha");
        Table t{"entries", cols, {}};
        std::vector<std::vector<int>> got;
        for (const auto& e : b.entries) {
            auto row = alpha_row(e.alpha);
            row.emplace_back(e.norm);
            row.emplace_back(e.log_norm);
            t.rows.push_back(std::move(row));
            got.push_back(e.alpha);
        }
        rec.tables.push_back(std::move(t));
        Table ex{"excluded", axis_names("alpha", n), {}};
        for (const auto& a : b.excluded) ex.rows.push_back(alpha_row(a));
        rec.tables.push_back(std::move(ex));
        rec.config = {{"degree_cap", cap}, {"depths", NormQuadrature{}.depths}, {"seed", "none"}};
        if (want) {
            auto w = *want;
            std::sort(w.begin(), w.end());
            std::sort(got.begin(), got.end());
            rec.check = Check{got == w, "expected " + std::to_string(w.size()) + " admissible exponents"};
        }
    };
}

TaskRunner prep_um_eval(const TaskContext& c) {
    auto u = c.expr("u");
    const auto m = c.positive("m");
    const auto cap = c.degree_cap();
    auto z = read_cvector(c.at("z"), c.ptr("z"), c.n());
    auto want = c.expect_real();
    auto tol = c.tol();
    return [u, m, cap, z, want, tol, n = c.n()](TaskRecord& rec, const RunOptions& o) {
        const auto b = basis_norms(u, n, m, cap);
        const double v = um_eval(b, z);
        rec.set("value", v);
        rec.set("truncation_ratio", truncation_ratio(b, z));
        rec.config = {{"degree_cap", cap}, {"seed", "none"}};
        check_real(rec, v, want, tol_or(tol, o));
    };
}

TaskRunner prep_sandwich(const TaskContext& c) {
    auto u = c.expr("u");
    auto ms = c.m_list();
    const auto cap = c.degree_cap();
    auto samples = default_sandwich_samples(c.n());
    if (c.has("samples")) {
        const auto p = c.ptr("samples");
        const auto& s = read_array(c.at("samples"), p);
        samples.clear();
        for (std::size_t i = 0; i < s.size(); ++i) samples.push_back(read_cvector(s[i], child(p, i), c.n()));
    }
    std::vector<double> radii(c.n(), 0.1);
    if (c.has("polyradii")) radii = read_dvector(c.at("polyradii"), c.ptr("polyradii"), c.n());
    double limit = 1e-10;
    if (c.has("truncation_limit")) limit = read_real(c.at("truncation_limit"), c.ptr("truncation_limit"));
    return [u, ms, cap, samples, radii, limit, n = c.n()](TaskRecord& rec, const RunOptions&) {
        const auto r = sandwich_check(u, n, ms, cap, samples, radii, limit);
        rec.set("finite", r.finite);
        rec.set("stable", r.stable);
        Table t{"constants", {"m", "c1", "c2", "samples_used", "samples_truncated"}, {}};
        for (const auto& row : r.rows)
            t.rows.push_back({static_cast<long long>(row.m), row.c1, row.c2, static_cast<long long>(row.samples_used),
                              static_cast<long long>(row.samples_truncated)});
        rec.tables.push_back(std::move(t));
        Json rj = Json::array();
        for (double x : radii) rj.push_back(round12(x));
        rec.config = {{"degree_cap", cap}, {"samples", samples.size()}, {"polyradii", rj},
                      {"truncation_limit", round12(limit)}, {"seed", "none"}};
        rec.check = Check{r.pass, r.pass ? "finite constants, bounded growth in m" : "constants infinite or growing in m"};
    };
}

TaskRunner prep_bounds(const TaskContext& c) {
    const auto& uo = c.object("u");
    auto su = c.exponents("u");
    auto u = uo.expr;
    auto sphi = c.exponents("phi");
    auto ms = c.m_list();
    const auto cap = c.degree_cap();
    auto sched = c.schedule();
    const double tol = c.tol().value_or(1e-2);
    return [u, su, sphi, ms, cap, sched, tol](TaskRecord& rec, const RunOptions& o) {
        const auto s = resolve(sched, o);
        const auto r = lelong_bounds_check(u, su, sphi, ms, cap, s, tol);
        rec.set("nu_exact", r.nu_exact);
        rec.set("tau_sum", r.tau_sum);
        Table t{"bounds", {"m", "nu_m", "lower_bound", "upper_bound", "lower_ok", "upper_ok"}, {}};
        for (const auto& row : r.rows)
            t.rows.push_back({static_cast<long long>(row.m), Estimate{row.nu_m.value, row.nu_m.error}, r.nu_exact,
                              Rational(r.nu_exact - r.tau_sum / row.m), row.lower_ok, row.upper_ok});
        rec.tables.push_back(std::move(t));
        rec.config = schedule_json(s);
        rec.config["degree_cap"] = cap;
        rec.config["tol"] = round12(tol);
        rec.check = Check{r.pass, "nu(u_m) <= nu(u) <= nu(u_m) + tau/m within " + format_real(tol)};
    };
}

const std::vector<OpDef>& ops() {
    static const std::vector<OpDef> table{
        {"dominated_hull", {"phi"}, {}, false, prep_dominated_hull},
        {"sublevel_vertices", {"phi"}, {}, false, prep_sublevel_vertices},
        {"dual_face", {"phi", "t0"}, {}, false, prep_dual_face},
        {"cone_volume", {"vertices"}, {}, false, prep_cone_volume},
        {"gamma_measure", {"phi"}, {}, false, prep_gamma_measure},
        {"theta_volume", {"phi"}, {}, false, prep_theta_volume},
        {"indicator_eval", {"phi", "y"}, {}, false, prep_indicator_eval},
        {"directional_lelong_exact", {"u", "a"}, {}, false, prep_directional_exact},
        {"generalized_lelong_exact", {"u", "phi"}, {}, false, prep_generalized_exact},
        {"newton_number", {"phi"}, {}, false, prep_newton_number},
        {"tau", {"phi", "k"}, {}, false, prep_tau},
        {"rescaled_indicator", {"phi", "m"}, {}, false, prep_rescaled_indicator},
        {"eval_expr", {"w", "z"}, {"transform_m"}, false, prep_eval_expr},
        {"torus_mean", {"w", "t"}, {"nodes", "transform_m"}, false, prep_torus_mean},
        {"directional_lelong_numeric", {"w", "a"}, {}, true, prep_directional_numeric},
        {"classical_lelong_numeric", {"w"}, {}, true, prep_classical_numeric},
        {"swept_measure_apply", {"phi", "w", "r"}, {"nodes", "transform_m"}, false, prep_swept_measure},
        {"generalized_lelong_numeric", {"phi", "w"}, {}, true, prep_generalized_numeric},
        {"slice_lelong", {"w", "k"}, {}, true, prep_slice},
        {"scaling_transform", {"w", "m"}, {}, false, prep_scaling_transform},
        {"indicator_profile", {"w", "directions"}, {}, true, prep_profile},
        {"psh_star_violations", {"w"}, {"transform_m"}, false, prep_psh_star},
        {"basis_norms", {"u", "m"}, {"N"}, false, prep_basis_norms},
        {"um_eval", {"u", "m", "z"}, {"N"}, false, prep_um_eval},
        {"sandwich_check", {"u", "m_list"}, {"N", "samples", "polyradii", "truncation_limit"}, false, prep_sandwich},
        {"lelong_bounds_check", {"u", "phi", "m_list"}, {"N", "schedule"}, false, prep_bounds},
    };
    return table;
}

ProblemObject read_object(const std::string& name, const Json& j, const std::string& ptr, std::size_t n) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        fail(ptr, "object needs a string \"kind\"");
    const auto kind = j["kind"].get<std::string>();
    if (kind == "monomial_weight") {
        check_keys(j, ptr, {"kind", "exponents"}, {});
        const auto p = child(ptr, "exponents");
        auto pts = read_qvectors(j["exponents"], p, n);
        auto s = located(p, [&] { return ExponentSet(n, std::move(pts)); });
        auto w = located(p, [&] { return monomial_expr(s); });
        return {name, kind, std::move(s), std::move(w)};
    }
    if (kind == "polynomial_log") {
        check_keys(j, ptr, {"kind", "terms"}, {});
        const auto p = child(ptr, "terms");
        auto terms = read_terms(j["terms"], p, n);
        auto w = located(p, [&] { return WeightExpr::poly_log(std::move(terms)); });
        return {name, kind, located(p, [&] { return poly_support(w, n); }), std::move(w)};
    }
    if (kind == "expr") {
        check_keys(j, ptr, {"kind", "expr"}, {});
        auto w = expr_from_json(j["expr"], n, child(ptr, "expr"));
        return {name, kind, located(ptr, [&] { return poly_support(w, n); }), std::move(w)};
    }
    fail(child(ptr, "kind"), "unknown object kind '" + kind + "' (expected monomial_weight, polynomial_log or expr)");
}

}  // namespace

WeightExpr expr_from_json(const Json& j, std::size_t n, const std::string& ptr) {
    if (!j.is_object() || j.size() != 1) fail(ptr, "expression node must be an object with exactly one tag");
    const auto& [tag, body] = *j.items().begin();
    const auto p = child(ptr, tag);
    if (tag == "poly_log") {
        auto terms = read_terms(body, p, n);
        return located(p, [&] { return WeightExpr::poly_log(std::move(terms)); });
    }
    if (tag == "max") {
        read_array(body, p);
        if (body.empty()) fail(p, "max needs at least one child");
        std::vector<WeightExpr> kids;
        for (std::size_t i = 0; i < body.size(); ++i) kids.push_back(expr_from_json(body[i], n, child(p, i)));
        return WeightExpr::max(std::move(kids));
    }
    if (tag == "scale") {
        check_keys(body, p, {"factor", "expr"}, {});
        const double f = read_real(body["factor"], child(p, "factor"));
        auto kid = expr_from_json(body["expr"], n, child(p, "expr"));
        return located(child(p, "factor"), [&] { return WeightExpr::scale(f, std::move(kid)); });
    }
    if (tag == "neg_pow_log") {
        check_keys(body, p, {"axis", "power"}, {});
        const auto axis = read_axis(body["axis"], child(p, "axis"), n);
        const double pw = read_real(body["power"], child(p, "power"));
        return located(child(p, "power"), [&] { return WeightExpr::neg_pow_log(axis, pw); });
    }
    if (tag == "coord_log") return WeightExpr::coord_log(read_axis(body, p, n));
    fail(p, "unknown expression tag '" + tag + "' (expected max, scale, neg_pow_log, coord_log or poly_log)");
}

Json expr_to_json(const WeightExpr& w) {
    return std::visit(
        [](const auto& node) -> Json {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, WeightExpr::PolyLog>) {
                Json terms = Json::array();
                for (const auto& t : node.terms)
                    terms.push_back({{"coeff", {round12(t.coeff.real()), round12(t.coeff.imag())}}, {"exponent", t.exponent}});
                return {{"poly_log", terms}};
            } else if constexpr (std::is_same_v<T, WeightExpr::Max>) {
                Json kids = Json::array();
                for (const auto& k : node.children) kids.push_back(expr_to_json(k));
                return {{"max", kids}};
            } else if constexpr (std::is_same_v<T, WeightExpr::Scale>) {
                return {{"scale", {{"factor", round12(node.factor)}, {"expr", expr_to_json(*node.child)}}}};
            } else if constexpr (std::is_same_v<T, WeightExpr::NegPowLog>) {
                return {{"neg_pow_log", {{"axis", node.axis + 1}, {"power", round12(node.power)}}}};
            } else {
                return {{"coord_log", node.axis + 1}};
            }
        },
        w.node());
}

std::vector<std::string> supported_ops() {
    std::vector<std::string> out;
    for (const auto& d : ops()) out.emplace_back(d.name);
    return out;
}

ProblemFile parse_problem_text(std::string_view text) {
    ProblemFile p;
    try {
        p.source = Json::parse(text);
    } catch (const Json::parse_error& e) {
        // nlohmann reports "... at line L, column C: ..."
        throw ProblemError(std::string("malformed JSON: ") + e.what());
    }
    const auto& j = p.source;
    check_keys(j, "", {"dimension", "objects", "tasks"}, {});
    const auto dim = read_int(j["dimension"], "/dimension");
    if (dim < 1 || dim > 8) fail("/dimension", "dimension must lie in 1..8");
    p.dimension = static_cast<std::size_t>(dim);

    if (!j["objects"].is_object()) fail("/objects", "expected an object mapping names to definitions");
    for (const auto& [name, def] : j["objects"].items())
        p.objects.emplace(name, read_object(name, def, child("/objects", name), p.dimension));

    read_array(j["tasks"], "/tasks");
    for (std::size_t i = 0; i < j["tasks"].size(); ++i) {
        const auto ptr = child("/tasks", i);
        const auto& t = j["tasks"][i];
        if (!t.is_object() || !t.contains("op") || !t["op"].is_string()) fail(ptr, "task needs a string \"op\"");
        const auto op = t["op"].get<std::string>();
        const auto it = std::find_if(ops().begin(), ops().end(), [&](const OpDef& d) { return d.name == op; });
        if (it == ops().end()) fail(child(ptr, "op"), "unknown op '" + op + "'");
        std::vector<std::string_view> optional{"op", "expect", "tol", "label"};
        optional.insert(optional.end(), it->optional.begin(), it->optional.end());
        if (it->numeric) {
            optional.push_back("schedule");
            optional.push_back("transform_m");
        }
        check_keys(t, ptr, it->required, optional);
        if (t.contains("label") && !t["label"].is_string()) fail(child(ptr, "label"), "expected a string");
        const TaskContext ctx(p, t, ptr);
        auto run = located(ptr, [&] { return it->prepare(ctx); });
        p.tasks.push_back({i + 1, op, t, std::move(run)});
    }
    return p;
}

ProblemFile parse_problem(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ProblemError(path.string() + ": cannot open problem file");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_problem_text(ss.str());
    } catch (const ProblemError& e) {
        throw ProblemError(path.string() + ": " + e.what());
    }
}

Report execute(const ProblemFile& problem, const RunOptions& options) {
    Report r;
    r.problem = problem.source;
    const auto opt = [](const auto& v) -> Json { return v ? Json(*v) : Json(nullptr); };
    r.run_config = {{"rmin", opt(options.rmin)},
                    {"levels", opt(options.levels)},
                    {"nodes", opt(options.nodes)},
                    {"tol", round12(options.tol)},
                    {"seed", "none"}};
    for (const auto& t : problem.tasks) {
        TaskRecord rec;
        rec.index = t.index;
        rec.op = t.op;
        rec.inputs = t.source;
        try {
            t.run(rec, options);
        } catch (const std::exception& e) {
            rec.results.clear();
            rec.tables.clear();
            rec.check.reset();
            rec.error = e.what();
        }
        r.tasks.push_back(std::move(rec));
    }
    return r;
}

}  // namespace lelong::cli
