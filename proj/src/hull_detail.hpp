#pragma once

// Beneath-beyond placing triangulation in exact arithmetic. Internal to the
// polytope kernel.

#include "tropma/rational.hpp"

#include <vector>

namespace tropma::detail {

struct BoundaryFacet {
    std::vector<std::size_t> verts;  // sorted indices into the input
    Point normal;                    // outward
    Rational offset;                 // normal . x <= offset on the hull
};

struct Hyperplane {
    Point normal;
    Rational offset;

    bool operator==(const Hyperplane&) const = default;
};

struct Triangulated {
    std::vector<BoundaryFacet> boundary;
    std::vector<std::size_t> used;  // input indices that became simplex vertices
};

/// Precondition: points are distinct, share dimension d >= 1, and span R^d.
Triangulated beneath_beyond(const std::vector<Point>& points);

/// Boundary facets merged by supporting hyperplane; normals scaled so the
/// first non-zero entry has absolute value one.
std::vector<Hyperplane> distinct_hyperplanes(const Triangulated& tri);

/// Coordinates on which the projection of `points` is affinely injective.
std::vector<std::size_t> spanning_coordinates(const std::vector<Point>& points);

Point project(const Point& p, const std::vector<std::size_t>& coords);

}  // namespace tropma::detail
