#include "lelong/poly_geom.hpp"

#include "lelong/errors.hpp"
#include "lelong/linalg.hpp"
#include "lelong/triangulation.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <utility>

namespace lelong {

namespace {

void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& visit) {
    if (k > n) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        visit(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

QVector unit(std::size_t n, std::size_t k) {
    QVector e(n, Rational(0));
    e[k] = 1;
    return e;
}

bool dominates(const QVector& q, const QVector& p) {
    for (std::size_t k = 0; k < p.size(); ++k)
        if (q[k] > p[k]) return false;
    return true;
}

// Drops every point that is >= some other point coordinatewise.
std::vector<QVector> undominated(const std::vector<QVector>& pts) {
    std::vector<QVector> keep;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < pts.size() && !dominated; ++j)
            dominated = j != i && dominates(pts[j], pts[i]);
        if (!dominated) keep.push_back(pts[i]);
    }
    return keep;
}

void sort_unique(std::vector<QVector>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

ExponentSet::ExponentSet(std::size_t dimension, std::vector<QVector> points)
    : dimension_(dimension), points_(std::move(points)) {
    if (dimension_ == 0) throw InputError("exponent set: dimension must be positive");
    if (points_.empty()) throw InputError("exponent set: at least one exponent vector is required");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (p.size() != dimension_)
            throw InputError("exponent set: point " + std::to_string(i) + " has " + std::to_string(p.size()) +
                             " coordinates, expected " + std::to_string(dimension_));
        bool nonzero = false;
        for (const auto& x : p) {
            if (x < 0)
                throw InputError("exponent set: point " + to_string(p) +
                                 " has a negative coordinate; exponents must be nonnegative");
            nonzero = nonzero || x != 0;
        }
        if (!nonzero) throw InputError("exponent set: the zero vector is not a valid exponent");
    }
    sort_unique(points_);
}

Rational ExponentSet::support(std::span<const Rational> t) const {
    Rational best = dot(points_.front(), t);
    for (std::size_t i = 1; i < points_.size(); ++i) best = std::max(best, Rational(dot(points_[i], t)));
    return best;
}

Rational ExponentSet::min_pairing(std::span<const Rational> a) const {
    Rational best = dot(points_.front(), a);
    for (std::size_t i = 1; i < points_.size(); ++i) best = std::min(best, Rational(dot(points_[i], a)));
    return best;
}

ExponentSet ExponentSet::scaled(const Rational& c) const {
    if (c <= 0) throw InputError("exponent set: scale factor must be positive");
    auto pts = points_;
    for (auto& p : pts)
        for (auto& x : p) x *= c;
    return ExponentSet(dimension_, std::move(pts));
}

ExponentSet ExponentSet::reduced() const { return ExponentSet(dimension_, dominated_hull(*this).hull_vertices); }

NewtonDiagram dominated_hull(const ExponentSet& s) {
    const std::size_t n = s.dimension();
    const auto pts = undominated(s.points());

    // Facets of P: hyperplanes spanned by j points and n-j recession
    // directions e_k, normal >= 0, every point on the far side.
    std::set<std::pair<QVector, Rational>> facet_keys;
    for (std::size_t j = 1; j <= n; ++j) {
        for_each_subset(pts.size(), j, [&](const std::vector<std::size_t>& chosen) {
            for_each_subset(n, n - j, [&](const std::vector<std::size_t>& axes) {
                QMatrix rows;
                for (std::size_t i = 1; i < chosen.size(); ++i) {
                    QVector r(n);
                    for (std::size_t k = 0; k < n; ++k) r[k] = pts[chosen[i]][k] - pts[chosen[0]][k];
                    rows.push_back(std::move(r));
                }
                for (auto k : axes) rows.push_back(unit(n, k));
                const auto null = linalg::nullspace(rows, n);
                if (null.size() != 1) return;
                QVector w = null.front();
                const bool has_pos = std::any_of(w.begin(), w.end(), [](const Rational& x) { return x > 0; });
                const bool has_neg = std::any_of(w.begin(), w.end(), [](const Rational& x) { return x < 0; });
                if (has_pos && has_neg) return;
                if (has_neg)
                    for (auto& x : w) x = -x;
                const Rational lead = *std::find_if(w.begin(), w.end(), [](const Rational& x) { return x != 0; });
                for (auto& x : w) x /= lead;
                const Rational c = dot(w, pts[chosen[0]]);
                for (const auto& q : pts)
                    if (dot(w, q) < c) return;
                facet_keys.emplace(std::move(w), c);
            });
        });
    }

    NewtonDiagram out{s, {}, {}, {}};
    for (const auto& p : pts) {
        QMatrix normals;
        for (const auto& [w, c] : facet_keys)
            if (dot(w, p) == c) normals.push_back(w);
        if (linalg::rank(normals, n) == n) out.hull_vertices.push_back(p);
    }
    sort_unique(out.hull_vertices);

    for (const auto& [w, c] : facet_keys) {
        DiagramFacet f{w, c, {}};
        for (const auto& v : out.hull_vertices)
            if (dot(w, v) == c) f.vertices.push_back(v);
        const bool bounded = std::all_of(w.begin(), w.end(), [](const Rational& x) { return x > 0; });
        if (bounded) {
            QVector t0(n);
            for (std::size_t k = 0; k < n; ++k) t0[k] = -w[k] / c;
            out.bounded_faces.push_back({f.vertices, std::move(t0)});
        }
        out.facets.push_back(std::move(f));
    }
    std::sort(out.bounded_faces.begin(), out.bounded_faces.end(),
              [](const BoundedFace& a, const BoundedFace& b) { return a.vertices < b.vertices; });
    return out;
}

bool SublevelPolyhedron::contains(std::span<const Rational> t) const {
    for (const auto& x : t)
        if (x > 0) return false;
    for (const auto& j : generators.points())
        if (dot(j, t) > -1) return false;
    return true;
}

bool SublevelPolyhedron::on_level_set(std::span<const Rational> t) const {
    return contains(t) && generators.support(t) == -1;
}

bool SublevelPolyhedron::is_extreme(std::span<const Rational> t) const {
    if (!contains(t)) return false;
    const std::size_t n = generators.dimension();
    QMatrix active;
    for (const auto& j : generators.points())
        if (dot(j, t) == -1) active.push_back(j);
    for (std::size_t k = 0; k < n; ++k)
        if (t[k] == 0) active.push_back(unit(n, k));
    return linalg::rank(active, n) == n;
}

SublevelPolyhedron sublevel_vertices(const ExponentSet& s) {
    const std::size_t n = s.dimension();
    // Dominated generators do not change f, so blocking is judged on the
    // hull vertices: {(1,0),(1,1)} is log|z_1| in disguise.
    const auto verts = dominated_hull(s).hull_vertices;
    for (std::size_t k = 0; k < n; ++k) {
        const bool blocked = std::any_of(verts.begin(), verts.end(), [k](const QVector& j) { return j[k] > 0; });
        if (!blocked) throw DegenerateIndicator(k);
    }

    // Constraint rows: <J,t> <= -1 for each generator, t_k <= 0 for each axis.
    QMatrix rows;
    QVector rhs;
    for (const auto& j : s.points()) {
        rows.push_back(j);
        rhs.push_back(-1);
    }
    for (std::size_t k = 0; k < n; ++k) {
        rows.push_back(unit(n, k));
        rhs.push_back(0);
    }

    SublevelPolyhedron out{s, {}};
    for_each_subset(rows.size(), n, [&](const std::vector<std::size_t>& chosen) {
        QMatrix a;
        QVector b;
        for (auto i : chosen) {
            a.push_back(rows[i]);
            b.push_back(rhs[i]);
        }
        auto t = linalg::solve(a, b);
        if (!t || !out.contains(*t)) return;
        out.extreme_points.push_back(std::move(*t));
    });
    sort_unique(out.extreme_points);
    for (const auto& t : out.extreme_points)
        if (!out.on_level_set(t)) throw std::logic_error("sublevel vertex off the level set: " + to_string(t));
    return out;
}

std::vector<QVector> dual_face(const NewtonDiagram& diagram, const SublevelPolyhedron& sub, std::span<const Rational> t0) {
    const QVector key(t0.begin(), t0.end());
    if (!std::binary_search(sub.extreme_points.begin(), sub.extreme_points.end(), key))
        throw InputError("dual face: " + to_string(t0) + " is not an extreme point of the sublevel polyhedron");
    std::vector<QVector> face;
    for (const auto& v : diagram.hull_vertices)
        if (dot(v, t0) == -1) face.push_back(v);
    return face;
}

std::vector<QVector> dual_face(const ExponentSet& s, std::span<const Rational> t0) {
    if (t0.size() != s.dimension()) throw InputError("dual face: dimension mismatch");
    return dual_face(dominated_hull(s), sublevel_vertices(s), t0);
}

Rational cone_volume(const std::vector<QVector>& face_vertices, std::size_t n) {
    std::vector<QVector> pts = face_vertices;
    for (const auto& p : pts)
        if (p.size() != n) throw InputError("cone volume: vertex " + to_string(p) + " is not in dimension " + std::to_string(n));
    sort_unique(pts);
    pts.push_back(QVector(n, Rational(0)));
    return geometry::polytope_volume(pts);
}

GammaMeasure gamma_measure(const ExponentSet& s) {
    const auto sub = sublevel_vertices(s);
    const auto diagram = dominated_hull(s);
    GammaMeasure out;
    out.dimension = s.dimension();
    out.total_mass = 0;
    for (const auto& t0 : sub.extreme_points) {
        Rational mass = cone_volume(dual_face(diagram, sub, t0), s.dimension());
        if (mass == 0) continue;
        out.total_mass += mass;
        out.atoms.push_back({t0, std::move(mass)});
    }
    return out;
}

Rational theta_volume(const NewtonDiagram& diagram) {
    Rational vol = 0;
    for (const auto& f : diagram.facets)
        if (f.offset > 0) vol += cone_volume(f.vertices, diagram.generators.dimension());
    return vol;
}

}  // namespace lelong
