#include "tropma/polytope.hpp"

#include "hull_detail.hpp"
#include "tropma/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace tropma {

namespace {

std::vector<Point> sorted_unique(std::span<const Point> points) {
    std::vector<Point> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

Point unit(std::size_t n, std::size_t i) {
    Point e(n, Rational(0));
    e[i] = 1;
    return e;
}

Rational fan_volume(const std::vector<Point>& pts, const detail::Triangulated& tri) {
    const std::size_t d = pts.front().size();
    // Lexicographically smallest point is always a vertex.
    const std::size_t base = *std::min_element(tri.used.begin(), tri.used.end(), [&](auto a, auto b) {
        return lex_less(pts[a], pts[b]);
    });
    Rational total = 0;
    for (const auto& f : tri.boundary) {
        if (std::find(f.verts.begin(), f.verts.end(), base) != f.verts.end()) {
            continue;
        }
        Matrix m;
        for (auto v : f.verts) {
            Point row(d);
            for (std::size_t j = 0; j < d; ++j) {
                row[j] = pts[v][j] - pts[base][j];
            }
            m.push_back(std::move(row));
        }
        total += abs(determinant(std::move(m)));
    }
    return total / factorial(static_cast<unsigned>(d));
}

// Affine equations a . x = b satisfied by all of `pts`, as a basis.
std::vector<Halfspace> affine_equations(const std::vector<Point>& pts) {
    const std::size_t n = pts.front().size();
    Matrix diffs;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        Point row(n);
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = pts[i][j] - pts[0][j];
        }
        diffs.push_back(std::move(row));
    }
    std::vector<Halfspace> eqs;
    for (auto& normal : nullspace(std::move(diffs), n)) {
        Rational off = dot(normal, pts[0]);
        eqs.push_back(Halfspace{normal, off});
    }
    return eqs;
}

Halfspace negate(const Halfspace& h) {
    Halfspace out = h;
    for (auto& v : out.normal) {
        v = -v;
    }
    out.offset = -out.offset;
    return out;
}

}  // namespace

bool RationalPolytope::contains(const Point& p) const {
    if (vertices_.empty() || p.size() != ambient_) {
        return false;
    }
    return std::all_of(facets_.begin(), facets_.end(),
                       [&](const Halfspace& h) { return dot(h.normal, p) <= h.offset; });
}

RationalPolytope convex_hull(std::span<const Point> points) {
    if (points.empty()) {
        throw std::invalid_argument("convex_hull: no points");
    }
    const std::size_t n = points.front().size();
    for (const auto& p : points) {
        if (p.size() != n) {
            throw std::invalid_argument("convex_hull: mixed dimensions");
        }
    }
    RationalPolytope out;
    out.ambient_ = n;
    auto pts = sorted_unique(points);
    out.dim_ = affine_dimension(pts);

    if (out.dim_ == 0) {
        out.vertices_ = pts;
        for (std::size_t i = 0; i < n; ++i) {
            Halfspace h{unit(n, i), pts[0][i]};
            out.facets_.push_back(negate(h));
            out.facets_.push_back(std::move(h));
        }
        return out;
    }

    const auto coords = detail::spanning_coordinates(pts);
    std::vector<Point> projected;
    projected.reserve(pts.size());
    for (const auto& p : pts) {
        projected.push_back(detail::project(p, coords));
    }

    std::vector<detail::Hyperplane> planes;
    std::vector<std::size_t> candidates;
    if (out.dim_ == 1) {
        // Projection onto one coordinate is monotone along the segment.
        std::size_t lo = 0;
        std::size_t hi = 0;
        for (std::size_t i = 1; i < projected.size(); ++i) {
            if (projected[i][0] < projected[lo][0]) {
                lo = i;
            }
            if (projected[i][0] > projected[hi][0]) {
                hi = i;
            }
        }
        candidates = {lo, hi};
        planes.push_back({Point{Rational(1)}, projected[hi][0]});
        planes.push_back({Point{Rational(-1)}, -projected[lo][0]});
        if (n == 1) {
            out.volume_ = projected[hi][0] - projected[lo][0];
        }
    } else {
        const auto tri = detail::beneath_beyond(projected);
        planes = detail::distinct_hyperplanes(tri);
        candidates = tri.used;
        if (static_cast<std::size_t>(out.dim_) == n) {
            out.volume_ = fan_volume(projected, tri);
        }
    }

    const auto d = static_cast<std::size_t>(out.dim_);
    for (auto idx : candidates) {
        Matrix tight;
        for (const auto& h : planes) {
            if (dot(h.normal, projected[idx]) == h.offset) {
                tight.push_back(h.normal);
            }
        }
        if (rank(std::move(tight)) == d) {
            out.vertices_.push_back(pts[idx]);
        }
    }
    std::sort(out.vertices_.begin(), out.vertices_.end(), lex_less);
    out.vertices_.erase(std::unique(out.vertices_.begin(), out.vertices_.end()), out.vertices_.end());

    for (const auto& h : planes) {
        Point normal(n, Rational(0));
        for (std::size_t j = 0; j < coords.size(); ++j) {
            normal[coords[j]] = h.normal[j];
        }
        out.facets_.push_back(Halfspace{std::move(normal), h.offset});
    }
    if (d < n) {
        for (const auto& eq : affine_equations(pts)) {
            out.facets_.push_back(negate(eq));
            out.facets_.push_back(eq);
        }
    }
    return out;
}

RationalPolytope minkowski_sum(const RationalPolytope& p, const RationalPolytope& q) {
    if (p.ambient_dimension() != q.ambient_dimension()) {
        throw std::invalid_argument("minkowski_sum: dimension mismatch");
    }
    if (p.empty() || q.empty()) {
        throw std::invalid_argument("minkowski_sum: empty operand");
    }
    std::vector<Point> sums;
    sums.reserve(p.vertices().size() * q.vertices().size());
    for (const auto& a : p.vertices()) {
        for (const auto& b : q.vertices()) {
            Point s(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                s[i] = a[i] + b[i];
            }
            sums.push_back(std::move(s));
        }
    }
    return convex_hull(sums);
}

Rational volume_exact(const RationalPolytope& p) { return p.volume(); }

NewtonDiagram::NewtonDiagram(std::vector<Point> generators) {
    if (generators.empty()) {
        throw std::invalid_argument("NewtonDiagram: no generators");
    }
    n_ = generators.front().size();
    for (const auto& g : generators) {
        if (g.size() != n_) {
            throw std::invalid_argument("NewtonDiagram: mixed dimensions");
        }
        for (const auto& v : g) {
            if (sgn(v) < 0) {
                throw std::invalid_argument("NewtonDiagram: negative exponent");
            }
        }
    }
    generators_ = sorted_unique(generators);

    std::vector<Point> rays;
    for (std::size_t i = 0; i < n_; ++i) {
        rays.push_back(unit(n_, i));
    }
    for (std::size_t i = 0; i < generators_.size(); ++i) {
        std::vector<Point> others;
        for (std::size_t j = 0; j < generators_.size(); ++j) {
            if (j != i) {
                others.push_back(generators_[j]);
            }
        }
        if (!in_conv_plus_cone(generators_[i], others, rays)) {
            vertices_.push_back(generators_[i]);
        }
    }

    convenient_ = true;
    for (std::size_t axis = 0; axis < n_ && convenient_; ++axis) {
        convenient_ = std::any_of(generators_.begin(), generators_.end(), [&](const Point& g) {
            for (std::size_t j = 0; j < n_; ++j) {
                if (j != axis && sgn(g[j]) != 0) {
                    return false;
                }
            }
            return true;
        });
    }
}

bool NewtonDiagram::contains(const Point& p) const {
    std::vector<Point> rays;
    for (std::size_t i = 0; i < n_; ++i) {
        rays.push_back(unit(n_, i));
    }
    return in_conv_plus_cone(p, vertices_, rays);
}

std::optional<Rational> covolume(const NewtonDiagram& d) {
    if (!d.convenient()) {
        return std::nullopt;
    }
    const std::size_t n = d.dimension();
    Rational side = 0;
    for (const auto& g : d.diagram_vertices()) {
        for (const auto& v : g) {
            side = std::max(side, v);
        }
    }
    if (sgn(side) == 0) {
        return Rational(0);
    }
    // Box ∩ upper set = conv of generators with any subset of coordinates
    // pushed to the box side.
    std::vector<Point> clipped;
    for (const auto& g : d.diagram_vertices()) {
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            Point p = g;
            for (std::size_t i = 0; i < n; ++i) {
                if (mask & (std::size_t{1} << i)) {
                    p[i] = side;
                }
            }
            clipped.push_back(std::move(p));
        }
    }
    Rational box = 1;
    for (std::size_t i = 0; i < n; ++i) {
        box *= side;
    }
    return box - volume_exact(convex_hull(clipped));
}

RegularSubdivision regular_subdivision(std::vector<LiftedPoint> lifted) {
    RegularSubdivision out;
    out.lifted_points = std::move(lifted);
    const auto& lp = out.lifted_points;
    if (lp.empty()) {
        return out;
    }
    const std::size_t n = lp.front().exponent.size();

    std::vector<Point> projected;
    std::vector<Point> lifted_pts;
    for (const auto& p : lp) {
        projected.push_back(p.exponent);
        Point q = p.exponent;
        q.push_back(p.height);
        lifted_pts.push_back(std::move(q));
    }
    if (static_cast<std::size_t>(affine_dimension(projected)) != n) {
        return out;
    }

    auto make_cell = [&](std::vector<std::size_t> indices, Point dual, Rational value) {
        std::vector<Point> cell_pts;
        for (auto i : indices) {
            cell_pts.push_back(lp[i].exponent);
        }
        out.cells.push_back(SubdivisionCell{std::move(indices), convex_hull(cell_pts), std::move(dual),
                                            std::move(value)});
    };

    if (static_cast<std::size_t>(affine_dimension(lifted_pts)) == n) {
        // All lifted points on one non-vertical hyperplane h = value - <x, a>.
        Matrix a;
        Point b;
        std::vector<std::size_t> basis{0};
        Matrix diffs;
        for (std::size_t i = 1; i < lp.size() && basis.size() < n + 1; ++i) {
            Point row(n);
            for (std::size_t j = 0; j < n; ++j) {
                row[j] = lp[i].exponent[j] - lp[0].exponent[j];
            }
            diffs.push_back(row);
            if (rank(diffs) == basis.size()) {
                basis.push_back(i);
            } else {
                diffs.pop_back();
            }
        }
        for (auto i : basis) {
            Point row = lp[i].exponent;
            row.push_back(Rational(-1));
            a.push_back(std::move(row));
            b.push_back(-lp[i].height);
        }
        auto sol = solve(std::move(a), std::move(b));
        if (!sol) {
            throw std::logic_error("regular_subdivision: singular flat lift");
        }
        Rational value = sol->back();
        sol->pop_back();
        std::vector<std::size_t> all(lp.size());
        for (std::size_t i = 0; i < all.size(); ++i) {
            all[i] = i;
        }
        make_cell(std::move(all), std::move(*sol), std::move(value));
        return out;
    }

    // Distinct lifted points; remember which input indices share each one.
    std::vector<Point> uniq = sorted_unique(lifted_pts);
    const auto tri = detail::beneath_beyond(uniq);
    for (const auto& h : detail::distinct_hyperplanes(tri)) {
        if (sgn(h.normal[n]) <= 0) {
            continue;
        }
        std::vector<std::size_t> indices;
        for (std::size_t i = 0; i < lifted_pts.size(); ++i) {
            if (dot(h.normal, lifted_pts[i]) == h.offset) {
                indices.push_back(i);
            }
        }
        Point dual(n);
        for (std::size_t j = 0; j < n; ++j) {
            dual[j] = h.normal[j] / h.normal[n];
        }
        make_cell(std::move(indices), std::move(dual), h.offset / h.normal[n]);
    }
    std::sort(out.cells.begin(), out.cells.end(), [](const auto& a, const auto& b) {
        return lex_less(a.dual_vertex, b.dual_vertex);
    });
    return out;
}

}  // namespace tropma
