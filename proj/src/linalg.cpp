#include "tropma/linalg.hpp"

#include <utility>

namespace tropma {

namespace {

// Reduces m in place to row echelon form; returns pivot columns.
std::vector<std::size_t> echelon(Matrix& m, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
        std::size_t sel = row;
        while (sel < m.size() && sgn(m[sel][col]) == 0) {
            ++sel;
        }
        if (sel == m.size()) {
            continue;
        }
        std::swap(m[row], m[sel]);
        const Rational inv = 1 / m[row][col];
        for (std::size_t j = col; j < cols; ++j) {
            m[row][j] *= inv;
        }
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || sgn(m[r][col]) == 0) {
                continue;
            }
            const Rational f = m[r][col];
            for (std::size_t j = col; j < cols; ++j) {
                m[r][j] -= f * m[row][j];
            }
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

std::size_t rank(Matrix m) {
    if (m.empty()) {
        return 0;
    }
    const auto cols = m.front().size();
    return echelon(m, cols).size();
}

Rational determinant(Matrix m) {
    const std::size_t n = m.size();
    Rational det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t sel = col;
        while (sel < n && sgn(m[sel][col]) == 0) {
            ++sel;
        }
        if (sel == n) {
            return 0;
        }
        if (sel != col) {
            std::swap(m[sel], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (sgn(m[r][col]) == 0) {
                continue;
            }
            const Rational f = m[r][col] / m[col][col];
            for (std::size_t j = col; j < n; ++j) {
                m[r][j] -= f * m[col][j];
            }
        }
    }
    return det;
}

std::vector<Point> nullspace(Matrix m, std::size_t cols) {
    const auto pivots = echelon(m, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : pivots) {
        is_pivot[p] = true;
    }
    std::vector<Point> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) {
            continue;
        }
        Point v(cols, Rational(0));
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) {
            v[pivots[r]] = -m[r][free];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Point> solve(Matrix a, Point b) {
    const std::size_t n = a.size();
    for (std::size_t r = 0; r < n; ++r) {
        a[r].push_back(b[r]);
    }
    const auto pivots = echelon(a, n + 1);
    if (pivots.size() != n || pivots.back() != n - 1) {
        return std::nullopt;
    }
    Point x(n);
    for (std::size_t r = 0; r < n; ++r) {
        x[r] = a[r][n];
    }
    return x;
}

int affine_dimension(std::span<const Point> points) {
    if (points.empty()) {
        return -1;
    }
    Matrix diffs;
    for (std::size_t i = 1; i < points.size(); ++i) {
        Point d(points[i].size());
        for (std::size_t j = 0; j < d.size(); ++j) {
            d[j] = points[i][j] - points[0][j];
        }
        diffs.push_back(std::move(d));
    }
    return static_cast<int>(rank(std::move(diffs)));
}

bool lp_feasible(const Matrix& a, const Point& b) {
    const std::size_t m = a.size();
    if (m == 0) {
        return true;
    }
    const std::size_t n = a.front().size();
    // Tableau columns: n structural, m artificial, then rhs.
    const std::size_t width = n + m + 1;
    Matrix t(m, Point(width, Rational(0)));
    std::vector<std::size_t> basis(m);
    for (std::size_t r = 0; r < m; ++r) {
        const bool flip = sgn(b[r]) < 0;
        for (std::size_t j = 0; j < n; ++j) {
            t[r][j] = flip ? Rational(-a[r][j]) : a[r][j];
        }
        t[r][n + r] = 1;
        t[r][width - 1] = flip ? Rational(-b[r]) : b[r];
        basis[r] = n + r;
    }
    // Reduced costs for minimizing the sum of artificials.
    Point cost(width, Rational(0));
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t j = 0; j < n; ++j) {
            cost[j] -= t[r][j];
        }
        cost[width - 1] -= t[r][width - 1];
    }
    while (true) {
        std::size_t enter = width;
        for (std::size_t j = 0; j < n + m; ++j) {
            if (sgn(cost[j]) < 0) {
                enter = j;
                break;
            }
        }
        if (enter == width) {
            break;
        }
        std::size_t leave = m;
        Rational best;
        for (std::size_t r = 0; r < m; ++r) {
            if (sgn(t[r][enter]) <= 0) {
                continue;
            }
            Rational ratio = t[r][width - 1] / t[r][enter];
            if (leave == m || ratio < best || (ratio == best && basis[r] < basis[leave])) {
                leave = r;
                best = std::move(ratio);
            }
        }
        if (leave == m) {
            break;  // unbounded phase one cannot happen; objective is bounded below by 0
        }
        const Rational piv = t[leave][enter];
        for (auto& v : t[leave]) {
            v /= piv;
        }
        for (std::size_t r = 0; r < m; ++r) {
            if (r == leave || sgn(t[r][enter]) == 0) {
                continue;
            }
            const Rational f = t[r][enter];
            for (std::size_t j = 0; j < width; ++j) {
                t[r][j] -= f * t[leave][j];
            }
        }
        if (sgn(cost[enter]) != 0) {
            const Rational f = cost[enter];
            for (std::size_t j = 0; j < width; ++j) {
                cost[j] -= f * t[leave][j];
            }
        }
        basis[leave] = enter;
    }
    return sgn(cost[width - 1]) == 0;
}

bool in_conv_plus_cone(const Point& p, std::span<const Point> points, std::span<const Point> rays) {
    if (points.empty()) {
        return false;
    }
    const std::size_t d = p.size();
    const std::size_t cols = points.size() + rays.size();
    Matrix a(d + 1, Point(cols, Rational(0)));
    Point b(d + 1);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < points.size(); ++j) {
            a[i][j] = points[j][i];
        }
        for (std::size_t j = 0; j < rays.size(); ++j) {
            a[i][points.size() + j] = rays[j][i];
        }
        b[i] = p[i];
    }
    for (std::size_t j = 0; j < points.size(); ++j) {
        a[d][j] = 1;
    }
    b[d] = 1;
    return lp_feasible(a, b);
}

}  // namespace tropma
