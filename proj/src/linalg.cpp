#include "lelong/linalg.hpp"

#include <utility>

namespace lelong::linalg {

RowEchelon row_reduce(QMatrix a, std::size_t cols) {
    RowEchelon out;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
        std::size_t piv = row;
        while (piv < a.size() && a[piv][col] == 0) ++piv;
        if (piv == a.size()) continue;
        std::swap(a[row], a[piv]);
        const Rational inv = 1 / a[row][col];
        for (auto& x : a[row]) x *= inv;
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == row || a[r][col] == 0) continue;
            const Rational f = a[r][col];
            for (std::size_t c = col; c < a[r].size(); ++c) a[r][c] -= f * a[row][c];
        }
        out.pivots.push_back(col);
        ++row;
    }
    out.reduced = std::move(a);
    return out;
}

std::size_t rank(const QMatrix& a, std::size_t cols) { return row_reduce(a, cols).rank(); }

Rational determinant(QMatrix a) {
    const std::size_t n = a.size();
    Rational det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a[r][col] == 0) continue;
            const Rational f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return det;
}

std::optional<QVector> solve(const QMatrix& a, const QVector& b) {
    const std::size_t n = a.size();
    QMatrix aug = a;
    for (std::size_t i = 0; i < n; ++i) aug[i].push_back(b[i]);
    auto ech = row_reduce(std::move(aug), n);
    if (ech.rank() < n) return std::nullopt;
    QVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[ech.pivots[i]] = ech.reduced[i][n];
    return x;
}

std::vector<QVector> nullspace(const QMatrix& a, std::size_t cols) {
    const auto ech = row_reduce(a, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : ech.pivots) is_pivot[p] = true;
    std::vector<QVector> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        QVector v(cols, Rational(0));
        v[free] = 1;
        for (std::size_t r = 0; r < ech.rank(); ++r) v[ech.pivots[r]] = -ech.reduced[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<std::size_t> affine_dimension(const std::vector<QVector>& points) {
    if (points.empty()) return std::nullopt;
    const std::size_t d = points.front().size();
    QMatrix diffs;
    for (std::size_t i = 1; i < points.size(); ++i) {
        QVector row(d);
        for (std::size_t k = 0; k < d; ++k) row[k] = points[i][k] - points[0][k];
        diffs.push_back(std::move(row));
    }
    return rank(diffs, d);
}

}  // namespace lelong::linalg
