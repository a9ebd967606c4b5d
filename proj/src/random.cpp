#include "tropma/random.hpp"

#include <stdexcept>

namespace tropma {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

std::seed_seq::result_type low32(std::uint64_t v) { return static_cast<std::seed_seq::result_type>(v & 0xffffffffULL); }

std::mt19937_64 seeded_engine(std::uint64_t seed) {
    std::uint64_t state = seed;
    const auto a = splitmix64(state);
    const auto b = splitmix64(state);
    std::seed_seq seq{low32(a), low32(a >> 32), low32(b), low32(b >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(seeded_engine(seed)) {}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("Rng::below: empty range");
    }
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
        v = next();
    } while (v >= limit);
    return v % bound;
}

long Rng::uniform(long lo, long hi) {
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

Rng Rng::substream(std::uint64_t index) const {
    std::uint64_t state = seed_ ^ (0xd1b54a32d192ed03ULL * (index + 1));
    return Rng(splitmix64(state));
}

Rational random_rational(Rng& rng, long lo_num, long hi_num, long max_den) {
    Rational r(rng.uniform(lo_num, hi_num), rng.uniform(1, max_den));
    r.canonicalize();
    return r;
}

TropicalExpr random_canonical_expr(Rng& rng, std::size_t n, std::size_t max_terms) {
    const auto count = static_cast<std::size_t>(rng.uniform(1, static_cast<long>(max_terms)));
    std::vector<Term> terms;
    for (std::size_t t = 0; t < count; ++t) {
        Term term{Point(n, Rational(0)), Rational(0)};
        for (auto& a : term.exponent) {
            if (rng.below(3) != 0) {
                a = random_rational(rng, 1, 4, 2);
            }
        }
        if (rng.below(4) != 0) {
            term.constant = -random_rational(rng, 1, 6, 3);
        }
        terms.push_back(std::move(term));
    }
    return canonicalize(TropicalExpr(n, std::move(terms)));
}

TropicalExpr random_convenient_expr(Rng& rng, std::size_t n, std::size_t extra) {
    std::vector<Term> terms;
    Point axis(n);
    for (std::size_t i = 0; i < n; ++i) {
        axis[i] = random_rational(rng, 1, 6, 3);
        Point a(n, Rational(0));
        a[i] = axis[i];
        terms.push_back(Term{std::move(a), Rational(0)});
    }
    // Mixed generators strictly below the axis simplex, so most survive
    // pruning: coordinate i is lambda_i * axis_i with sum of lambda_i < 1.
    const auto mixed = extra == 0 ? 0 : static_cast<std::size_t>(rng.uniform(1, static_cast<long>(extra)));
    for (std::size_t t = 0; t < mixed; ++t) {
        Point a(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = axis[i] * Rational(rng.uniform(1, 3), static_cast<unsigned long>(4 * n));
            a[i].canonicalize();
        }
        terms.push_back(Term{std::move(a), Rational(0)});
    }
    return canonicalize(TropicalExpr(n, std::move(terms)));
}

std::vector<Point> random_points(Rng& rng, std::size_t n, std::size_t count) {
    std::vector<Point> out;
    for (std::size_t p = 0; p < count; ++p) {
        Point x(n);
        for (auto& v : x) {
            v = Rational(rng.uniform(0, 16), 4);
            v.canonicalize();
        }
        out.push_back(std::move(x));
    }
    return out;
}

}  // namespace tropma
