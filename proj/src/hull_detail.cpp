#include "hull_detail.hpp"

#include "tropma/linalg.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace tropma::detail {

namespace {

// Hyperplane through d points in R^d, oriented so `inside` is strictly below.
BoundaryFacet make_facet(const std::vector<Point>& pts, std::vector<std::size_t> verts, const Point& inside) {
    std::sort(verts.begin(), verts.end());
    const std::size_t d = inside.size();
    Matrix diffs;
    const Point& base = pts[verts[0]];
    for (std::size_t i = 1; i < verts.size(); ++i) {
        Point row(d);
        for (std::size_t j = 0; j < d; ++j) {
            row[j] = pts[verts[i]][j] - base[j];
        }
        diffs.push_back(std::move(row));
    }
    auto ns = nullspace(std::move(diffs), d);
    if (ns.size() != 1) {
        throw std::logic_error("degenerate facet in beneath-beyond");
    }
    Point normal = std::move(ns.front());
    Rational offset = dot(normal, base);
    if (dot(normal, inside) > offset) {
        for (auto& v : normal) {
            v = -v;
        }
        offset = -offset;
    }
    return BoundaryFacet{std::move(verts), std::move(normal), std::move(offset)};
}

}  // namespace

Triangulated beneath_beyond(const std::vector<Point>& points) {
    const std::size_t d = points.front().size();
    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return lex_less(points[a], points[b]); });

    // Initial simplex: greedy affine-rank growth in lex order.
    std::vector<std::size_t> simplex{order[0]};
    Matrix diffs;
    for (std::size_t k = 1; k < order.size() && simplex.size() < d + 1; ++k) {
        Point row(d);
        for (std::size_t j = 0; j < d; ++j) {
            row[j] = points[order[k]][j] - points[order[0]][j];
        }
        diffs.push_back(row);
        if (rank(diffs) == simplex.size()) {
            simplex.push_back(order[k]);
        } else {
            diffs.pop_back();
        }
    }
    if (simplex.size() != d + 1) {
        throw std::invalid_argument("beneath_beyond: points are not full-dimensional");
    }

    Point inside(d, Rational(0));
    for (auto i : simplex) {
        for (std::size_t j = 0; j < d; ++j) {
            inside[j] += points[i][j];
        }
    }
    for (auto& v : inside) {
        v /= static_cast<long>(d + 1);
    }

    Triangulated out;
    std::vector<BoundaryFacet> facets;
    std::vector<bool> alive;
    for (std::size_t skip = 0; skip <= d; ++skip) {
        std::vector<std::size_t> verts;
        for (std::size_t i = 0; i <= d; ++i) {
            if (i != skip) {
                verts.push_back(simplex[i]);
            }
        }
        facets.push_back(make_facet(points, std::move(verts), inside));
        alive.push_back(true);
    }
    std::vector<bool> in_simplex(points.size(), false);
    for (auto i : simplex) {
        in_simplex[i] = true;
        out.used.push_back(i);
    }

    for (auto idx : order) {
        if (in_simplex[idx]) {
            continue;
        }
        const Point& p = points[idx];
        std::vector<std::size_t> visible;
        for (std::size_t f = 0; f < facets.size(); ++f) {
            if (alive[f] && dot(facets[f].normal, p) > facets[f].offset) {
                visible.push_back(f);
            }
        }
        if (visible.empty()) {
            continue;
        }
        std::map<std::vector<std::size_t>, int> ridge_count;
        for (auto f : visible) {
            const auto& verts = facets[f].verts;
            for (std::size_t drop = 0; drop < verts.size(); ++drop) {
                std::vector<std::size_t> ridge;
                for (std::size_t i = 0; i < verts.size(); ++i) {
                    if (i != drop) {
                        ridge.push_back(verts[i]);
                    }
                }
                ++ridge_count[ridge];
            }
            alive[f] = false;
        }
        for (const auto& [ridge, count] : ridge_count) {
            if (count != 1) {
                continue;
            }
            auto verts = ridge;
            verts.push_back(idx);
            facets.push_back(make_facet(points, std::move(verts), inside));
            alive.push_back(true);
        }
        out.used.push_back(idx);
    }
    for (std::size_t f = 0; f < facets.size(); ++f) {
        if (alive[f]) {
            out.boundary.push_back(std::move(facets[f]));
        }
    }
    std::sort(out.used.begin(), out.used.end());
    return out;
}

std::vector<Hyperplane> distinct_hyperplanes(const Triangulated& tri) {
    std::vector<Hyperplane> planes;
    for (const auto& f : tri.boundary) {
        Hyperplane h{f.normal, f.offset};
        Rational scale;
        for (const auto& v : h.normal) {
            if (sgn(v) != 0) {
                scale = abs(v);
                break;
            }
        }
        for (auto& v : h.normal) {
            v /= scale;
        }
        h.offset /= scale;
        if (std::find(planes.begin(), planes.end(), h) == planes.end()) {
            planes.push_back(std::move(h));
        }
    }
    return planes;
}

std::vector<std::size_t> spanning_coordinates(const std::vector<Point>& points) {
    const std::size_t n = points.front().size();
    std::vector<std::size_t> coords;
    std::size_t current_rank = 0;
    for (std::size_t c = 0; c < n; ++c) {
        auto trial = coords;
        trial.push_back(c);
        std::vector<Point> projected;
        projected.reserve(points.size());
        for (const auto& p : points) {
            projected.push_back(project(p, trial));
        }
        const auto r = static_cast<std::size_t>(affine_dimension(projected));
        if (r > current_rank) {
            coords = std::move(trial);
            current_rank = r;
        }
    }
    return coords;
}

Point project(const Point& p, const std::vector<std::size_t>& coords) {
    Point out;
    out.reserve(coords.size());
    for (auto c : coords) {
        out.push_back(p[c]);
    }
    return out;
}

}  // namespace tropma::detail
