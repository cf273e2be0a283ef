#include "lelong/triangulation.hpp"

#include "lelong/linalg.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace lelong::geometry {

namespace {

// Calls visit(subset) for every k-subset of {0..n-1} in lexicographic order.
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

// Coordinates that parametrize the affine hull of `points` injectively.
std::vector<std::size_t> chart_coordinates(const std::vector<QVector>& points) {
    const std::size_t d = points.front().size();
    QMatrix diffs;
    for (std::size_t i = 1; i < points.size(); ++i) {
        QVector row(d);
        for (std::size_t k = 0; k < d; ++k) row[k] = points[i][k] - points[0][k];
        diffs.push_back(std::move(row));
    }
    return linalg::row_reduce(std::move(diffs), d).pivots;
}

std::vector<QVector> project(const std::vector<QVector>& points, const std::vector<std::size_t>& coords) {
    std::vector<QVector> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        QVector q;
        q.reserve(coords.size());
        for (auto c : coords) q.push_back(p[c]);
        out.push_back(std::move(q));
    }
    return out;
}

void triangulate(const std::vector<QVector>& points, const std::vector<std::size_t>& ids, std::vector<Simplex>& out) {
    const std::size_t d = points.front().size();
    if (d == 0) {
        out.push_back({ids.front()});
        return;
    }
    const std::size_t apex = 0;
    for (const auto& facet : hull_facets(points)) {
        if (std::find(facet.members.begin(), facet.members.end(), apex) != facet.members.end()) continue;
        std::vector<QVector> face_pts;
        std::vector<std::size_t> face_ids;
        for (auto m : facet.members) {
            face_pts.push_back(points[m]);
            face_ids.push_back(ids[m]);
        }
        std::vector<Simplex> sub;
        triangulate(project(face_pts, chart_coordinates(face_pts)), face_ids, sub);
        for (auto& s : sub) {
            s.insert(s.begin(), ids[apex]);
            out.push_back(std::move(s));
        }
    }
}

}  // namespace

std::vector<HullFacet> hull_facets(const std::vector<QVector>& points) {
    std::vector<HullFacet> facets;
    if (points.empty()) return facets;
    const std::size_t d = points.front().size();
    std::set<std::vector<std::size_t>> seen;
    for_each_subset(points.size(), d, [&](const std::vector<std::size_t>& subset) {
        QMatrix rows;
        for (std::size_t i = 1; i < subset.size(); ++i) {
            QVector row(d);
            for (std::size_t k = 0; k < d; ++k) row[k] = points[subset[i]][k] - points[subset[0]][k];
            rows.push_back(std::move(row));
        }
        const auto null = linalg::nullspace(rows, d);
        if (null.size() != 1) return;
        QVector normal = null.front();
        Rational offset = dot(normal, points[subset[0]]);
        bool below = false, above = false;
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const Rational v = dot(normal, points[i]);
            if (v == offset) members.push_back(i);
            else if (v < offset) below = true;
            else above = true;
        }
        if (below && above) return;
        if (below) {
            for (auto& x : normal) x = -x;
            offset = -offset;
        }
        if (!seen.insert(members).second) return;
        facets.push_back({std::move(normal), std::move(offset), std::move(members)});
    });
    return facets;
}

std::vector<Simplex> pulling_triangulation(const std::vector<QVector>& points) {
    std::vector<Simplex> out;
    if (points.empty()) return out;
    std::vector<std::size_t> ids(points.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    triangulate(points, ids, out);
    return out;
}

Rational simplex_volume(const std::vector<QVector>& vertices) {
    const std::size_t d = vertices.front().size();
    QMatrix m;
    for (std::size_t i = 1; i < vertices.size(); ++i) {
        QVector row(d);
        for (std::size_t k = 0; k < d; ++k) row[k] = vertices[i][k] - vertices[0][k];
        m.push_back(std::move(row));
    }
    const Rational det = linalg::determinant(std::move(m));
    return abs(det) / factorial(static_cast<unsigned>(d));
}

Rational polytope_volume(const std::vector<QVector>& points) {
    if (points.empty()) return 0;
    const std::size_t d = points.front().size();
    if (linalg::affine_dimension(points).value_or(0) < d) return 0;
    Rational vol = 0;
    for (const auto& s : pulling_triangulation(points)) {
        std::vector<QVector> verts;
        for (auto i : s) verts.push_back(points[i]);
        vol += simplex_volume(verts);
    }
    return vol;
}

}  // namespace lelong::geometry
