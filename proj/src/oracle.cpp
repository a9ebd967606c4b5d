#include "tropma/oracle.hpp"

#include "tropma/measure.hpp"
#include "tropma/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

namespace tropma {

namespace {

using Vec = std::vector<double>;

constexpr std::size_t kSubstreams = 16;

struct Halfplane {
    Vec normal;
    double offset;  // normal . y >= offset on the kept side
};

Vec to_doubles(const Point& p) {
    Vec out;
    for (const auto& v : p) {
        out.push_back(v.get_d());
    }
    return out;
}

double dot(const Vec& a, const Vec& b) { return std::inner_product(a.begin(), a.end(), b.begin(), 0.0); }

// Solves the square system a x = b; nullopt when (numerically) singular.
std::optional<Vec> solve_square(std::vector<Vec> a, Vec b) {
    const std::size_t m = a.size();
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < m; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) {
                pivot = r;
            }
        }
        if (std::abs(a[pivot][col]) < 1e-12) {
            return std::nullopt;
        }
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col) {
                continue;
            }
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < m; ++c) {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    Vec x(m);
    for (std::size_t i = 0; i < m; ++i) {
        x[i] = b[i] / a[i][i];
    }
    return x;
}

// Null vector of a (n-1) x n matrix of full rank, else nullopt.
std::optional<Vec> null_vector(const std::vector<Vec>& rows, std::size_t n) {
    // Try each coordinate as the free one, fixed to 1.
    for (std::size_t free = 0; free < n; ++free) {
        std::vector<Vec> a;
        Vec b;
        for (const auto& r : rows) {
            Vec row;
            for (std::size_t c = 0; c < n; ++c) {
                if (c != free) {
                    row.push_back(r[c]);
                }
            }
            a.push_back(std::move(row));
            b.push_back(-r[free]);
        }
        if (auto x = solve_square(a, b)) {
            Vec out;
            std::size_t k = 0;
            for (std::size_t c = 0; c < n; ++c) {
                out.push_back(c == free ? 1.0 : (*x)[k++]);
            }
            return out;
        }
    }
    return std::nullopt;
}

template <typename F>
void for_each_combination(std::size_t total, std::size_t size, F&& f) {
    if (size > total) {
        return;
    }
    std::vector<std::size_t> idx(size);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        f(idx);
        std::size_t i = size;
        while (i > 0 && idx[i - 1] == total - size + i - 1) {
            --i;
        }
        if (i == 0) {
            return;
        }
        ++idx[i - 1];
        for (std::size_t j = i; j < size; ++j) {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

// Halfspaces w . y >= 1 (w >= 0) through n - |Z| generators with w_Z = 0.
std::vector<Halfplane> diagram_halfspaces(const std::vector<Vec>& gens, std::size_t n) {
    std::vector<Halfplane> out;
    for (std::size_t zmask = 0; zmask + 1 < (std::size_t{1} << n); ++zmask) {
        std::vector<std::size_t> free;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(zmask & (std::size_t{1} << i))) {
                free.push_back(i);
            }
        }
        for_each_combination(gens.size(), free.size(), [&](const std::vector<std::size_t>& pick) {
            std::vector<Vec> a;
            for (auto g : pick) {
                Vec row;
                for (auto i : free) {
                    row.push_back(gens[g][i]);
                }
                a.push_back(std::move(row));
            }
            const auto w = solve_square(a, Vec(free.size(), 1.0));
            if (!w || std::any_of(w->begin(), w->end(), [](double v) { return v < -1e-12; })) {
                return;
            }
            Vec normal(n, 0.0);
            for (std::size_t k = 0; k < free.size(); ++k) {
                normal[free[k]] = std::max(0.0, (*w)[k]);
            }
            for (const auto& g : gens) {
                if (dot(normal, g) < 1 - 1e-9) {
                    return;
                }
            }
            out.push_back(Halfplane{std::move(normal), 1.0});
        });
    }
    return out;
}

// Facets of conv(points) as halfspaces normal . y >= offset.
std::vector<Halfplane> hull_halfspaces(const std::vector<Vec>& pts, std::size_t n) {
    std::vector<Halfplane> out;
    for_each_combination(pts.size(), n, [&](const std::vector<std::size_t>& pick) {
        std::vector<Vec> rows;
        for (std::size_t k = 1; k < pick.size(); ++k) {
            Vec d(n);
            for (std::size_t i = 0; i < n; ++i) {
                d[i] = pts[pick[k]][i] - pts[pick[0]][i];
            }
            rows.push_back(std::move(d));
        }
        auto normal = null_vector(rows, n);
        if (!normal) {
            return;
        }
        const double norm = std::sqrt(dot(*normal, *normal));
        for (auto& v : *normal) {
            v /= norm;
        }
        double offset = dot(*normal, pts[pick[0]]);
        bool above = false;
        bool below = false;
        for (const auto& p : pts) {
            const double s = dot(*normal, p) - offset;
            above = above || s > 1e-9;
            below = below || s < -1e-9;
        }
        if (above && below) {
            return;
        }
        if (below) {
            for (auto& v : *normal) {
                v = -v;
            }
            offset = -offset;
        }
        out.push_back(Halfplane{std::move(*normal), offset});
    });
    return out;
}

// Counts samples in the box [0, extent) failing (inside = false) or
// satisfying (inside = true) every halfspace, one substream per chunk.
std::uint64_t count_hits(const Vec& lo, const Vec& extent, const std::vector<Halfplane>& hs, bool want_inside,
                         std::uint64_t samples, std::uint64_t seed) {
    const Rng root(seed);
    std::vector<std::uint64_t> hits(kSubstreams, 0);
    auto run = [&](std::size_t stream) {
        Rng rng = root.substream(stream);
        const std::uint64_t quota = samples / kSubstreams + (stream < samples % kSubstreams ? 1 : 0);
        Vec y(extent.size());
        std::uint64_t local = 0;
        for (std::uint64_t s = 0; s < quota; ++s) {
            for (std::size_t i = 0; i < y.size(); ++i) {
                y[i] = lo[i] + extent[i] * rng.unit();
            }
            bool inside = true;
            for (const auto& h : hs) {
                if (dot(h.normal, y) < h.offset) {
                    inside = false;
                    break;
                }
            }
            local += inside == want_inside ? 1 : 0;
        }
        hits[stream] = local;
    };
    const std::size_t workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), kSubstreams));
    if (workers == 1) {
        for (std::size_t s = 0; s < kSubstreams; ++s) {
            run(s);
        }
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t s = w; s < kSubstreams; s += workers) {
                    run(s);
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    return std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
}

OracleReport hit_or_miss(std::string method, const Rational& exact, double box_volume, std::uint64_t hits,
                         std::uint64_t samples, std::uint64_t seed) {
    OracleReport r{std::move(method), exact, 0, 0, samples, seed, false};
    const double p = samples == 0 ? 0 : static_cast<double>(hits) / static_cast<double>(samples);
    r.estimate = box_volume * p;
    r.std_error = samples == 0 ? 0 : box_volume * std::sqrt(p * (1 - p) / static_cast<double>(samples));
    r.pass = std::abs(r.estimate - exact.get_d()) <= 3 * r.std_error + 1e-12 * std::max(1.0, box_volume);
    return r;
}

}  // namespace

OracleReport mc_covolume(const NewtonDiagram& d, std::uint64_t samples, std::uint64_t seed) {
    const auto exact = covolume(d);
    if (!exact) {
        throw std::invalid_argument("mc_covolume: diagram is not convenient");
    }
    const std::size_t n = d.dimension();
    std::vector<Vec> gens;
    for (const auto& g : d.generators()) {
        gens.push_back(to_doubles(g));
    }
    if (std::any_of(gens.begin(), gens.end(),
                    [](const Vec& g) { return std::all_of(g.begin(), g.end(), [](double v) { return v == 0; }); })) {
        return hit_or_miss("mc_covolume", *exact, 0, 0, samples, seed);
    }
    Vec extent(n, std::numeric_limits<double>::infinity());
    for (const auto& g : gens) {
        std::size_t support = 0;
        std::size_t axis = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (g[i] != 0) {
                ++support;
                axis = i;
            }
        }
        if (support == 1) {
            extent[axis] = std::min(extent[axis], g[axis]);
        }
    }
    const double box = std::accumulate(extent.begin(), extent.end(), 1.0, std::multiplies<>());
    const auto hs = diagram_halfspaces(gens, n);
    const auto hits = count_hits(Vec(n, 0.0), extent, hs, false, samples, seed);
    return hit_or_miss("mc_covolume", *exact, box, hits, samples, seed);
}

OracleReport mc_volume(const RationalPolytope& p, std::uint64_t samples, std::uint64_t seed) {
    const Rational exact = volume_exact(p);
    const std::size_t n = p.ambient_dimension();
    std::vector<Vec> pts;
    for (const auto& v : p.vertices()) {
        pts.push_back(to_doubles(v));
    }
    Vec lo(n, std::numeric_limits<double>::infinity());
    Vec hi(n, -std::numeric_limits<double>::infinity());
    for (const auto& v : pts) {
        for (std::size_t i = 0; i < n; ++i) {
            lo[i] = std::min(lo[i], v[i]);
            hi[i] = std::max(hi[i], v[i]);
        }
    }
    const auto hs = hull_halfspaces(pts, n);
    if (pts.size() <= n || hs.empty()) {
        return hit_or_miss("mc_volume", exact, 0, 0, samples, seed);
    }
    Vec extent(n);
    for (std::size_t i = 0; i < n; ++i) {
        extent[i] = hi[i] - lo[i];
    }
    const double box = std::accumulate(extent.begin(), extent.end(), 1.0, std::multiplies<>());
    const auto hits = count_hits(lo, extent, hs, true, samples, seed);
    return hit_or_miss("mc_volume", exact, box, hits, samples, seed);
}

OracleReport grid_real_ma(const TropicalExpr& e, const LogBox& box, unsigned resolution) {
    const auto canon = canonicalize(e);
    const std::size_t n = canon.n();
    if (n != 2 && n != 3) {
        throw std::invalid_argument("grid_real_ma: n must be 2 or 3");
    }
    if (box.lo.size() != n || box.hi.size() != n) {
        throw DimensionError("grid_real_ma: box dimension differs from n");
    }
    if (resolution == 0) {
        throw std::invalid_argument("grid_real_ma: resolution must be positive");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(box.lo[i] < box.hi[i]) || sgn(box.hi[i]) >= 0) {
            throw std::invalid_argument("grid_real_ma: box must be non-degenerate and inside (-inf, 0)^n");
        }
    }
    const auto& terms = canon.terms();
    std::vector<Vec> slopes;
    Vec consts;
    for (const auto& t : terms) {
        slopes.push_back(to_doubles(t.exponent));
        consts.push_back(t.constant.get_d());
    }
    const std::size_t side = resolution + 1;
    std::size_t nodes = 1;
    for (std::size_t i = 0; i < n; ++i) {
        nodes *= side;
    }
    const Vec lo = to_doubles(box.lo);
    const Vec hi = to_doubles(box.hi);
    auto coords = [&](std::size_t node) {
        std::vector<std::size_t> c(n);
        for (std::size_t i = 0; i < n; ++i) {
            c[i] = node % side;
            node /= side;
        }
        return c;
    };
    // Maximising term sets per grid node (the subgradient's vertices).
    std::vector<std::vector<std::uint32_t>> active(nodes);
    Vec x(n);
    for (std::size_t node = 0; node < nodes; ++node) {
        const auto c = coords(node);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = lo[i] + (hi[i] - lo[i]) * static_cast<double>(c[i]) / resolution;
        }
        double best = -std::numeric_limits<double>::infinity();
        Vec values(terms.size());
        for (std::size_t t = 0; t < terms.size(); ++t) {
            values[t] = consts[t] + dot(slopes[t], x);
            best = std::max(best, values[t]);
        }
        const double tol = 1e-12 * (1 + std::abs(best));
        for (std::size_t t = 0; t < terms.size(); ++t) {
            if (values[t] >= best - tol) {
                active[node].push_back(static_cast<std::uint32_t>(t));
            }
        }
    }
    auto full_dimensional = [&](const std::set<std::uint32_t>& idx) {
        if (idx.size() <= n) {
            return false;
        }
        std::vector<Point> pts;
        for (auto t : idx) {
            pts.push_back(terms[t].exponent);
        }
        return convex_hull(pts).dimension() == static_cast<int>(n);
    };
    // Grid cells indexed by their lowest corner; flagged cells carry the
    // union of their corners' active sets.
    const std::size_t cells_per_side = resolution;
    std::map<std::size_t, std::set<std::uint32_t>> flagged;
    std::size_t cell_count = 1;
    for (std::size_t i = 0; i < n; ++i) {
        cell_count *= cells_per_side;
    }
    for (std::size_t cell = 0; cell < cell_count; ++cell) {
        std::vector<std::size_t> base(n);
        std::size_t rest = cell;
        for (std::size_t i = 0; i < n; ++i) {
            base[i] = rest % cells_per_side;
            rest /= cells_per_side;
        }
        std::set<std::uint32_t> idx;
        for (std::size_t corner = 0; corner < (std::size_t{1} << n); ++corner) {
            std::size_t node = 0;
            std::size_t stride = 1;
            for (std::size_t i = 0; i < n; ++i) {
                node += (base[i] + ((corner >> i) & 1)) * stride;
                stride *= side;
            }
            idx.insert(active[node].begin(), active[node].end());
        }
        if (idx.size() > n && full_dimensional(idx)) {
            flagged.emplace(cell, std::move(idx));
        }
    }
    // Cluster flagged cells touching at a face, edge or corner.
    std::map<std::size_t, std::size_t> parent;
    for (const auto& [cell, idx] : flagged) {
        parent[cell] = cell;
    }
    std::function<std::size_t(std::size_t)> find = [&](std::size_t c) {
        return parent[c] == c ? c : parent[c] = find(parent[c]);
    };
    for (const auto& [cell, idx] : flagged) {
        std::vector<long> base(n);
        std::size_t rest = cell;
        for (std::size_t i = 0; i < n; ++i) {
            base[i] = static_cast<long>(rest % cells_per_side);
            rest /= cells_per_side;
        }
        std::size_t offsets = 1;
        for (std::size_t i = 0; i < n; ++i) {
            offsets *= 3;
        }
        for (std::size_t o = 0; o < offsets; ++o) {
            std::size_t code = o;
            std::size_t other = 0;
            std::size_t stride = 1;
            bool valid = true;
            for (std::size_t i = 0; i < n; ++i) {
                const long c = base[i] + static_cast<long>(code % 3) - 1;
                code /= 3;
                valid = valid && c >= 0 && c < static_cast<long>(cells_per_side);
                other += static_cast<std::size_t>(std::max(c, 0L)) * stride;
                stride *= cells_per_side;
            }
            if (valid && flagged.count(other) != 0) {
                parent[find(cell)] = find(other);
            }
        }
    }
    std::map<std::size_t, std::set<std::uint32_t>> clusters;
    for (const auto& [cell, idx] : flagged) {
        clusters[find(cell)].insert(idx.begin(), idx.end());
    }
    const Rational nfact = factorial(static_cast<unsigned>(n));
    double estimate = 0;
    for (const auto& [root, idx] : clusters) {
        std::vector<Point> pts;
        for (auto t : idx) {
            pts.push_back(terms[t].exponent);
        }
        estimate += Rational(nfact * volume_exact(convex_hull(pts))).get_d();
    }
    Rational exact = 0;
    for (const auto& atom : interior_atoms(canon)) {
        bool inside = true;
        for (std::size_t i = 0; i < n; ++i) {
            inside = inside && box.lo[i] <= atom.location[i].value() && atom.location[i].value() <= box.hi[i];
        }
        if (inside) {
            exact += atom.mass;
        }
    }
    OracleReport r{"grid_real_ma", exact, estimate, 0, nodes, 0, false};
    const double target = exact.get_d();
    r.pass = sgn(exact) == 0 ? std::abs(estimate) <= 1e-9 : std::abs(estimate - target) <= 0.01 * target;
    return r;
}

nlohmann::json to_json(const OracleReport& r) {
    return {{"method", r.method}, {"exact", to_string(r.exact)}, {"estimate", r.estimate},
            {"std_error", r.std_error}, {"samples", r.samples},  {"seed", r.seed},
            {"verdict", r.pass ? "pass" : "fail"}};
}

}  // namespace tropma
