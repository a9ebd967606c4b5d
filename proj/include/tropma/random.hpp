#pragma once

#include "tropma/expr.hpp"

#include <cstdint>
#include <random>

namespace tropma {

/// One SplitMix64 step: advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state);

/// mt19937_64 seeded through SplitMix64. Integer and real draws are derived
/// from raw 64-bit outputs only, so streams do not depend on the standard
/// library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, bound), rejection sampled.
    std::uint64_t below(std::uint64_t bound);
    long uniform(long lo, long hi);
    /// Uniform in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    /// Independent stream `index` derived from this generator's seed.
    Rng substream(std::uint64_t index) const;

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// p/q with p in [lo_num, hi_num], q in [1, max_den].
Rational random_rational(Rng& rng, long lo_num, long hi_num, long max_den);

/// Random canonical expression with non-positive constants and at most
/// `max_terms` terms before pruning.
TropicalExpr random_canonical_expr(Rng& rng, std::size_t n, std::size_t max_terms);

/// Homogeneous expression with one generator on every axis plus 1 to
/// `extra` mixed generators. Convenient, and its measure is a single atom at
/// the origin, so it satisfies the product hypothesis.
TropicalExpr random_convenient_expr(Rng& rng, std::size_t n, std::size_t extra);

/// `count` points of the quarter-integer grid in [0, 4]^n (repeats and
/// degenerate configurations are deliberately common).
std::vector<Point> random_points(Rng& rng, std::size_t n, std::size_t count);

}  // namespace tropma
