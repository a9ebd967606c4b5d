#pragma once

#include "tropma/rational.hpp"

#include <span>
#include <vector>

namespace tropma {

/// Dense row-major rational matrix, just enough for exact elimination.
using Matrix = std::vector<Point>;

/// Rank by Gaussian elimination over Q.
std::size_t rank(Matrix m);

Rational determinant(Matrix m);

/// Basis of {x : m x = 0}; `cols` is needed when m has no rows.
std::vector<Point> nullspace(Matrix m, std::size_t cols);

/// Unique solution of a square non-singular system, or nullopt.
std::optional<Point> solve(Matrix a, Point b);

/// Affine dimension of a point set (-1 for the empty set).
int affine_dimension(std::span<const Point> points);

/// Exact phase-one simplex: is {x >= 0 : A x = b} non-empty?
/// Bland's rule, so it always terminates.
bool lp_feasible(const Matrix& a, const Point& b);

/// Whether p lies in conv(points) + cone(rays). Empty `points` means false.
bool in_conv_plus_cone(const Point& p, std::span<const Point> points, std::span<const Point> rays);

}  // namespace tropma
