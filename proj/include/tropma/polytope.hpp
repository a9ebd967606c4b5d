#pragma once

#include "tropma/rational.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace tropma {

/// normal . x <= offset
struct Halfspace {
    Point normal;
    Rational offset;

    bool operator==(const Halfspace&) const = default;
};

/// Convex hull of finitely many rational points, kept as its extreme points
/// (V-representation) together with an H-representation derived at
/// construction. Lower-dimensional polytopes are allowed; their
/// H-representation includes both sides of each affine equation.
class RationalPolytope {
public:
    RationalPolytope() = default;

    std::size_t ambient_dimension() const { return ambient_; }
    /// Affine dimension; -1 for the empty polytope.
    int dimension() const { return dim_; }
    bool empty() const { return vertices_.empty(); }

    /// Extreme points in lexicographic order.
    const std::vector<Point>& vertices() const { return vertices_; }
    const std::vector<Halfspace>& facets() const { return facets_; }

    bool contains(const Point& p) const;

    /// Lebesgue volume in the ambient space: 0 unless full-dimensional.
    const Rational& volume() const { return volume_; }

    bool operator==(const RationalPolytope& other) const { return vertices_ == other.vertices_; }

private:
    friend RationalPolytope convex_hull(std::span<const Point> points);

    std::size_t ambient_ = 0;
    int dim_ = -1;
    std::vector<Point> vertices_;
    std::vector<Halfspace> facets_;
    Rational volume_ = 0;
};

/// Throws std::invalid_argument on empty input or mixed dimensions.
RationalPolytope convex_hull(std::span<const Point> points);

/// Throws std::invalid_argument when ambient dimensions differ.
RationalPolytope minkowski_sum(const RationalPolytope& p, const RationalPolytope& q);

/// Fan triangulation from the lexicographically smallest vertex.
Rational volume_exact(const RationalPolytope& p);

/// conv(generators) + R^n_{>=0}, described by its generating exponents.
class NewtonDiagram {
public:
    explicit NewtonDiagram(std::vector<Point> generators);

    std::size_t dimension() const { return n_; }
    const std::vector<Point>& generators() const { return generators_; }
    /// Generators that are vertices of conv(generators) + R^n_{>=0}, lex order.
    const std::vector<Point>& diagram_vertices() const { return vertices_; }
    /// Every axis carries a generator supported on that axis alone (or 0).
    bool convenient() const { return convenient_; }

    /// Whether p lies in conv(generators) + R^n_{>=0}.
    bool contains(const Point& p) const;

private:
    std::size_t n_ = 0;
    std::vector<Point> generators_;
    std::vector<Point> vertices_;
    bool convenient_ = false;
};

/// Volume of R^n_{>=0} minus the diagram's upper set; nullopt when the
/// diagram is not convenient (the complement is unbounded).
std::optional<Rational> covolume(const NewtonDiagram& d);

struct LiftedPoint {
    Point exponent;
    Rational height;
};

struct SubdivisionCell {
    std::vector<std::size_t> indices;  // into RegularSubdivision::lifted_points
    RationalPolytope polytope;         // projection of the upper face
    Point dual_vertex;                 // x maximising height + <x, exponent> on exactly this face
    Rational dual_value;               // that maximum
};

struct RegularSubdivision {
    std::vector<LiftedPoint> lifted_points;
    std::vector<SubdivisionCell> cells;  // full-dimensional cells only
};

/// Projects the upper faces of conv{(a, h)}. Non-simplicial faces remain
/// single cells. Lower-dimensional configurations give no cells.
RegularSubdivision regular_subdivision(std::vector<LiftedPoint> lifted);

}  // namespace tropma
