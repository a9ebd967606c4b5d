#include "tropma/dsl.hpp"
#include "tropma/random.hpp"
#include "tropma/slice.hpp"

#include <doctest.h>

using namespace tropma;

namespace {

Rational q(long p, long d = 1) { return Rational(p, d); }

TropicalExpr ex(const char* s, std::size_t n = 0) { return parse_expr(s, n); }

}  // namespace

TEST_CASE("Lelong number at the origin") {
    const auto e = ex("max(3*x1, 2*x2)");
    CHECK(lelong_at_origin(e) == 2);
    // Diagonal limit g(t, t) / t evaluated far out.
    const Rational t = -1000000;
    CHECK(eval(e, {ExtRational(t), ExtRational(t)}).value() / t == 2);
    CHECK(lelong_at_origin(ex("max(x1, x2)")) == 1);
    CHECK(lelong_at_origin(ex("max(x1, x2, -3)")) == 0);
}

TEST_CASE("slice profiles") {
    const auto a = slice_lelong_profile(ex("max(x1, x2)"), 1);
    CHECK(a.generic_value == 0);
    REQUIRE(a.strata.size() == 1);
    CHECK(a.strata[0].coordinates == Stratum{0});
    CHECK(a.strata[0].nu == q(1));

    const auto b = slice_lelong_profile(ex("max(x1 + x2, 3*x2)"), 1);
    CHECK(b.generic_value == 1);
    CHECK(b.strata[0].nu == q(3));

    const auto c = slice_lelong_profile(ex("max(x1 + x2, x3, -1)"), 2);
    CHECK(c.generic_value == 0);
    for (const auto& s : c.strata) {
        CHECK(s.nu == q(0));
    }

    const auto d = slice_lelong_profile(ex("x1 + x2"), 1);
    REQUIRE(d.strata.size() == 1);
    CHECK_FALSE(d.strata[0].nu.has_value());
    CHECK(to_json(d)["strata"][0]["nu"] == "inf");
}

TEST_CASE("stratum values agree with slicing then taking the Lelong number") {
    for (std::size_t i = 0; i < 40; ++i) {
        Rng rng(50 + i);
        const auto e = random_canonical_expr(rng, 3, 6);
        const std::size_t k = 1 + i % 2;
        const auto p = slice_lelong_profile(e, k);
        for (const auto& s : p.strata) {
            std::vector<std::pair<std::size_t, ExtRational>> fixed;
            for (std::size_t j = 0; j < k; ++j) {
                const bool killed = std::find(s.coordinates.begin(), s.coordinates.end(), j) != s.coordinates.end();
                fixed.emplace_back(j, killed ? ExtRational::neg_inf() : ExtRational(q(-1, 3)));
            }
            const auto slice = substitute_slice(e, fixed);
            if (std::holds_alternative<IdenticallyNegInf>(slice)) {
                CHECK_FALSE(s.nu.has_value());
            } else {
                REQUIRE(s.nu.has_value());
                CHECK(lelong_at_origin(std::get<TropicalExpr>(slice)) == *s.nu);
                CHECK(*s.nu >= p.generic_value);
            }
        }
    }
}

TEST_CASE("E sets") {
    const auto a = E_set(ex("max(x1, x2)"), 1, q(1, 2));
    CHECK_FALSE(a.whole_polydisc);
    CHECK(a.strata == std::vector<Stratum>{{0}});
    const auto b = E_set(ex("max(x1 + x2, x3, -2)"), 2, q(1, 5));
    CHECK_FALSE(b.whole_polydisc);
    const auto c = E_set(ex("x1 + x2"), 1, q(1));
    CHECK(c.whole_polydisc);
    CHECK_THROWS(E_set(ex("x1 + x2"), 1, q(0)));
}

TEST_CASE("E sets shrink as t grows") {
    for (std::size_t i = 0; i < 30; ++i) {
        Rng rng(150 + i);
        const auto e = random_canonical_expr(rng, 3, 6);
        const std::size_t k = 1 + i % 2;
        const auto small = E_set(e, k, q(1, 4));
        const auto large = E_set(e, k, q(3));
        if (!small.whole_polydisc) {
            CHECK_FALSE(large.whole_polydisc);
            for (const auto& s : large.strata) {
                CHECK(std::any_of(small.strata.begin(), small.strata.end(), [&](const Stratum& m) {
                    return std::includes(s.begin(), s.end(), m.begin(), m.end());
                }));
            }
        }
    }
}

TEST_CASE("phi constancy examples") {
    const std::vector<Point> grid{{q(-1, 2)}, {q(-3)}, {q(-20)}};
    CHECK(phi_constancy_check(ex("max(x1, x2)"), 1, grid));
    CHECK(PhiFunction(ex("max(x1, x2)"), 1).limit_value() == 0);
    CHECK(phi_constancy_check(ex("x2", 2), 1, grid));
    CHECK(PhiFunction(ex("x2", 2), 1).limit_value() == -1);
    CHECK_THROWS(phi_constancy_check(ex("x2", 2), 1, {{q(1)}}));
}

TEST_CASE("phi values and stabilization") {
    const PhiFunction phi(ex("max(x1 - 1, 2*x2)"), 1);
    // g(-1, -s) / s = max(-2, -2s) / s
    CHECK(phi.value({q(-1)}, q(1)) == -2);
    CHECK(phi.value({q(-1)}, q(4)) == q(-1, 2));
    CHECK(phi.stabilization_depth({q(-1)}) == 1);
    CHECK(phi.limit_value() == 0);
}

TEST_CASE("property: phi is non-decreasing in depth and reaches its limit") {
    for (std::size_t i = 0; i < 50; ++i) {
        Rng rng(250 + i);
        const auto e = random_canonical_expr(rng, 3, 6);
        const std::size_t k = 1 + i % 2;
        const PhiFunction phi(e, k);
        const Point x(k, -random_rational(rng, 1, 9, 4));
        Rational previous = phi.value(x, q(1, 8));
        for (Rational s = q(1, 4); s <= 4096; s *= 2) {
            const auto v = phi.value(x, s);
            CHECK(v >= previous);
            CHECK(v <= 0);
            previous = v;
        }
        const Rational s0 = phi.stabilization_depth(x) + 1;
        const auto far = phi.value(x, 1000 * s0);
        CHECK(far >= phi.limit_value() + (phi.value(x, s0) - phi.limit_value()) / 1000 - q(1, 1000000000));
        CHECK(phi_constancy_check(e, k, {x}));
    }
}

TEST_CASE("property: scaling, sum and max covariance of limits") {
    for (std::size_t i = 0; i < 30; ++i) {
        Rng rng(350 + i);
        const auto u = random_canonical_expr(rng, 3, 5);
        const auto v = random_canonical_expr(rng, 3, 5);
        const Rational lam = random_rational(rng, 0, 7, 3);
        CHECK(lelong_at_origin(scale(u, lam)) == lam * lelong_at_origin(u));
        const std::size_t k = 1 + i % 2;
        const auto lu = PhiFunction(u, k).limit_value();
        const auto lv = PhiFunction(v, k).limit_value();
        CHECK(PhiFunction(make_sum(u, v), k).limit_value() == lu + lv);
        CHECK(PhiFunction(make_max(u, v), k).limit_value() == std::max(lu, lv));
    }
}

TEST_CASE("class E criterion") {
    CHECK(classE_phi_zero(ex("max(x1, x2)"), 1));
    CHECK_FALSE(classE_phi_zero(ex("max(x1 + x2, 3*x2)"), 1));
    CHECK(classE_phi_zero(ex("max(x1 + x2, 3*x2, -5)"), 1));
}

TEST_CASE("uniform convergence profiles") {
    const std::vector<Rational> depths{q(1), q(2), q(4), q(8), q(16)};
    const auto affine = capacity_convergence_profile(ex("x2", 2), 1, depths, q(3));
    for (std::size_t i = 0; i < affine.size(); ++i) {
        // |(-M - s)/s + 1| = M / s at the lower corner.
        CHECK(affine[i].sup_error == q(3) / depths[i]);
    }
    const auto kink = capacity_convergence_profile(ex("max(x1, x2)"), 1, depths, q(2));
    for (std::size_t i = 1; i < kink.size(); ++i) {
        CHECK(kink[i].sup_error <= kink[i - 1].sup_error);
    }
    CHECK(kink.back().sup_error <= q(1, 8));
    CHECK_THROWS(capacity_convergence_profile(ex("x2", 2), 1, {q(2), q(1)}, q(2)));
}

TEST_CASE("property: convergence error is eventually decreasing to zero") {
    for (std::size_t i = 0; i < 30; ++i) {
        Rng rng(450 + i);
        const auto e = random_canonical_expr(rng, 3, 6);
        const std::size_t k = 1 + i % 2;
        std::vector<Rational> depths;
        for (long s = 64; s <= 65536; s *= 4) {
            depths.push_back(q(s));
        }
        const auto prof = capacity_convergence_profile(e, k, depths, q(4));
        for (std::size_t j = 1; j < prof.size(); ++j) {
            CHECK(prof[j].sup_error <= prof[j - 1].sup_error);
        }
        CHECK(prof.back().sup_error < q(1, 100));
    }
}

TEST_CASE("toric slice invariant examples") {
    CHECK(toric_slice_invariant(ex("max(2*x1, x2, -1)"), 1));
    const auto lift = lift_to_subvariety(ex("max(2*x1, 3*x2)"), 3);
    CHECK(toric_slice_invariant(lift.u, 2));
    for (std::size_t i = 0; i < 40; ++i) {
        Rng rng(550 + i);
        CHECK(toric_slice_invariant(random_canonical_expr(rng, 3, 6), 1 + i % 2));
    }
}
