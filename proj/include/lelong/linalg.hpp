#pragma once

#include "lelong/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

// Exact dense linear algebra over Q for the small systems (n <= 4..6)
// that appear in vertex enumeration and triangulation.
namespace lelong::linalg {

struct RowEchelon {
    QMatrix reduced;                      // reduced row echelon form
    std::vector<std::size_t> pivots;      // pivot column of each nonzero row
    std::size_t rank() const { return pivots.size(); }
};

RowEchelon row_reduce(QMatrix a, std::size_t cols);

std::size_t rank(const QMatrix& a, std::size_t cols);

Rational determinant(QMatrix a);

// Unique solution of a square system, or nullopt when singular.
std::optional<QVector> solve(const QMatrix& a, const QVector& b);

// Basis of {x : a x = 0}.
std::vector<QVector> nullspace(const QMatrix& a, std::size_t cols);

// Affine dimension of a point set (-1 encoded as nullopt for the empty set).
std::optional<std::size_t> affine_dimension(const std::vector<QVector>& points);

}  // namespace lelong::linalg
