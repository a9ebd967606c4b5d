#include "tropma/dsl.hpp"
#include "tropma/measure.hpp"
#include "tropma/oracle.hpp"
#include "tropma/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace tropma;

namespace {

Rational q(long p, long d = 1) { return Rational(p, d); }

TropicalExpr ex(const char* s, std::size_t n = 0) { return parse_expr(s, n); }

ExtPoint neg_inf(std::size_t n) { return ExtPoint(n, ExtRational::neg_inf()); }

// Area under the lower-left boundary of a convenient 2-d diagram, from a
// monotone-chain lower hull (independent of the exact kernel).
Rational covolume_2d(std::vector<Point> g) {
    std::sort(g.begin(), g.end(), lex_less);
    std::vector<Point> chain;
    for (const auto& p : g) {
        while (chain.size() >= 2) {
            const auto& a = chain[chain.size() - 2];
            const auto& b = chain.back();
            const Rational cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
            if (sgn(cross) <= 0) {
                chain.pop_back();
            } else {
                break;
            }
        }
        chain.push_back(p);
    }
    Rational area = 0;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        if (chain[i + 1][1] > chain[i][1]) {
            break;
        }
        area += (chain[i + 1][0] - chain[i][0]) * (chain[i][1] + chain[i + 1][1]) / 2;
    }
    return area;
}

std::vector<Point> exps(const TropicalExpr& e) {
    std::vector<Point> out;
    for (const auto& t : e.terms()) {
        out.push_back(t.exponent);
    }
    return out;
}

Rational shoelace_hull(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) {
        return 0;
    }
    auto cross = [](const Point& o, const Point& a, const Point& b) {
        return Rational((a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]));
    };
    // Andrew's monotone chain.
    std::vector<Point> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && sgn(cross(h[k - 2], h[k - 1], pts[i])) <= 0) {
            --k;
        }
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && sgn(cross(h[k - 2], h[k - 1], pts[i])) <= 0) {
            --k;
        }
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    Rational twice = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const auto& a = h[i];
        const auto& b = h[(i + 1) % h.size()];
        twice += a[0] * b[1] - a[1] * b[0];
    }
    return abs(twice) / 2;
}

// Tropical vertices of a 2-variable expression by solving every 3-term tie
// system, with 2!·(hull area of all tied exponents) as the mass.
std::map<Point, Rational, decltype(&lex_less)> brute_atoms(const TropicalExpr& e) {
    std::map<Point, Rational, decltype(&lex_less)> out(&lex_less);
    const auto& t = e.terms();
    for (std::size_t a = 0; a < t.size(); ++a) {
        for (std::size_t b = a + 1; b < t.size(); ++b) {
            for (std::size_t c = b + 1; c < t.size(); ++c) {
                // c_a + A.x = c_b + B.x = c_c + C.x
                const Rational m11 = t[a].exponent[0] - t[b].exponent[0];
                const Rational m12 = t[a].exponent[1] - t[b].exponent[1];
                const Rational m21 = t[a].exponent[0] - t[c].exponent[0];
                const Rational m22 = t[a].exponent[1] - t[c].exponent[1];
                const Rational r1 = t[b].constant - t[a].constant;
                const Rational r2 = t[c].constant - t[a].constant;
                const Rational det = m11 * m22 - m12 * m21;
                if (sgn(det) == 0) {
                    continue;
                }
                const Point x{(r1 * m22 - m12 * r2) / det, (m11 * r2 - r1 * m21) / det};
                if (sgn(x[0]) >= 0 || sgn(x[1]) >= 0 || out.count(x) != 0) {
                    continue;
                }
                const Rational top = t[a].constant + dot(t[a].exponent, x);
                std::vector<Point> tied;
                bool maximal = true;
                for (const auto& s : t) {
                    const Rational v = s.constant + dot(s.exponent, x);
                    maximal = maximal && v <= top;
                    if (v == top) {
                        tied.push_back(s.exponent);
                    }
                }
                if (maximal) {
                    out[x] = 2 * shoelace_hull(tied);
                }
            }
        }
    }
    return out;
}

}  // namespace

TEST_CASE("single max of two slopes has origin mass equal to their product") {
    const auto m = origin_mass(ex("max(2*x1, 3*x2)"));
    CHECK(m.convenient);
    CHECK(m.value == 6);
}

TEST_CASE("origin mass of max(x1,x2) + max(2x1,x2)") {
    const auto e = make_sum(ex("max(x1, x2)"), ex("max(2*x1, x2)"));
    CHECK(origin_mass(e).value == 5);
    CHECK(2 * covolume_2d(exps(e)) == 5);
}

TEST_CASE("non-convenient origin reports a zero lower bound") {
    const auto m = origin_mass(ex("x1", 2));
    CHECK_FALSE(m.convenient);
    CHECK(m.value == 0);
    const auto measure = total_measure(ex("x1", 2));
    CHECK(measure.atoms.empty());
    CHECK(std::find(measure.unresolved_strata.begin(), measure.unresolved_strata.end(), Stratum{0, 1}) !=
          measure.unresolved_strata.end());
}

TEST_CASE("interior atom of max(x1, x2, -1)") {
    const auto atoms = interior_atoms(ex("max(x1, x2, -1)"));
    REQUIRE(atoms.size() == 1);
    CHECK(atoms[0].location == ExtPoint{ExtRational(q(-1)), ExtRational(q(-1))});
    CHECK(atoms[0].mass == 1);
    CHECK(interior_atoms(ex("max(x1, x2)")).empty());
}

TEST_CASE("interior atoms of a two-term sum match brute-force vertices") {
    const auto e = make_sum(ex("max(x1, x2, -1/2)"), ex("max(x1, 2*x2, -1/3)"));
    const auto atoms = interior_atoms(e);
    const auto brute = brute_atoms(e);
    REQUIRE(atoms.size() == brute.size());
    for (const auto& a : atoms) {
        const Point x{a.location[0].value(), a.location[1].value()};
        REQUIRE(brute.count(x) == 1);
        CHECK(brute.at(x) == a.mass);
    }
    // Frozen from the brute-force enumeration above.
    CHECK(atoms.size() == 3);
    CHECK(atoms[0].mass == 1);
    CHECK(atoms[0].location == ExtPoint{ExtRational(q(-1, 2)), ExtRational(q(-1, 2))});
}

TEST_CASE("property: interior atoms match brute-force vertices on random expressions") {
    for (std::size_t i = 0; i < 60; ++i) {
        Rng rng(700 + i);
        const auto e = random_canonical_expr(rng, 2, 7);
        const auto atoms = interior_atoms(e);
        const auto brute = brute_atoms(e);
        CHECK(atoms.size() == brute.size());
        for (const auto& a : atoms) {
            CHECK(sgn(a.mass) > 0);
            const Point x{a.location[0].value(), a.location[1].value()};
            CHECK(brute.count(x) == 1);
            if (brute.count(x) == 1) {
                CHECK(brute.at(x) == a.mass);
            }
        }
    }
}

TEST_CASE("vertices outside the polydisc are discarded and counted") {
    std::size_t discarded = 0;
    // All heights zero: the single cell is dual to the vertex x = 0.
    const auto atoms = interior_atoms(ex("max(3*x1, x1 + x2, 2*x2)"), &discarded);
    CHECK(atoms.empty());
    CHECK(discarded == 1);
    // Vertex at (-1, 1/2); every term is still strictly maximal somewhere in x < 0.
    const auto e = ex("max(-1, x1, 2*x1 + x2 + 1/2)");
    CHECK(e.terms().size() == 3);
    CHECK(interior_atoms(e, &discarded).empty());
    CHECK(discarded == 1);
}

TEST_CASE("total measure examples") {
    const auto unit = total_measure(ex("max(x1, x2)"));
    REQUIRE(unit.atoms.size() == 1);
    CHECK(unit.atoms[0].location == neg_inf(2));
    CHECK(unit.atoms[0].mass == 1);
    CHECK(unit.unresolved_strata.empty());

    const auto line = total_measure(ex("x1 + x2"));
    CHECK(line.atoms.empty());
    CHECK(line.total_mass() == 0);
}

TEST_CASE("measure of max(phi, x3) with an interior phi atom is computed directly") {
    // phi = max(2x1, 3x2, -1) charges {phi > -inf}, so no product structure
    // applies; the direct 3-variable computation gives one interior atom.
    const auto m = total_measure(ex("max(2*x1, 3*x2, -1, x3)"));
    REQUIRE(m.atoms.size() == 1);
    CHECK(m.atoms[0].location == ExtPoint{ExtRational(q(-1, 2)), ExtRational(q(-1, 3)), ExtRational(q(-1))});
    CHECK(m.atoms[0].mass == 6);
    CHECK(m.unresolved_strata.empty());
}

TEST_CASE("mass report sums to total") {
    const auto m = total_measure(ex("max(2*x1, x2, x1 + x2 + 1)"));
    const auto r = mass_report(m, 2);
    CHECK(r.origin == 2);
    CHECK(r.interior == 1);
    CHECK(r.total == r.origin + r.interior);
}

TEST_CASE("partial strata where every term dies stay unresolved") {
    // On {z1 = z3 = 0} both terms vanish to -inf; nothing decides the mass.
    const auto m = total_measure(ex("max(x1 + x2, x3)"));
    CHECK(m.atoms.empty());
    CHECK(std::find(m.unresolved_strata.begin(), m.unresolved_strata.end(), Stratum{0, 2}) != m.unresolved_strata.end());
    CHECK(std::find(m.unresolved_strata.begin(), m.unresolved_strata.end(), Stratum{2}) == m.unresolved_strata.end());
    const auto convenient = total_measure(ex("max(x1, 2*x2)"));
    CHECK(convenient.unresolved_strata.empty());
    CHECK(convenient.total_mass() == 2);
}

TEST_CASE("mixed origin masses") {
    std::vector<TropicalExpr> same{ex("max(x1, 3*x2)"), ex("max(x1, 3*x2)")};
    CHECK(mixed_origin_mass(same) == origin_mass(same[0]).value);
    std::vector<TropicalExpr> pair{ex("max(x1, x2)"), ex("max(2*x1, x2)")};
    CHECK(mixed_origin_mass(pair) == 1);
    std::vector<TropicalExpr> bad{ex("x1", 2), ex("max(x1, x2)")};
    CHECK_THROWS_AS(mixed_origin_mass(bad), std::domain_error);
}

TEST_CASE("property: mixed mass of two bi-monomials is min(ad, bc)") {
    std::vector<std::string> counterexamples;
    for (std::size_t i = 0; i < 20; ++i) {
        Rng rng(800 + i);
        const Rational a = random_rational(rng, 1, 9, 4);
        const Rational b = random_rational(rng, 1, 9, 4);
        const Rational c = random_rational(rng, 1, 9, 4);
        const Rational d = random_rational(rng, 1, 9, 4);
        std::vector<TropicalExpr> us{TropicalExpr(2, {Term{{a, q(0)}, 0}, Term{{q(0), b}, 0}}),
                                     TropicalExpr(2, {Term{{c, q(0)}, 0}, Term{{q(0), d}, 0}})};
        const Rational mixed = mixed_origin_mass(us);
        if (mixed != std::min(Rational(a * d), Rational(b * c))) {
            counterexamples.push_back(to_string(a) + "," + to_string(b) + "," + to_string(c) + "," + to_string(d));
        }
    }
    CHECK_MESSAGE(counterexamples.empty(), "counterexamples: ", counterexamples.size());
}

TEST_CASE("property: polarization reproduces the mass polynomial") {
    for (std::size_t i = 0; i < 10; ++i) {
        Rng rng(900 + i);
        const auto u = random_convenient_expr(rng, 2, 2);
        const auto v = random_convenient_expr(rng, 2, 2);
        std::vector<TropicalExpr> uv{u, v};
        const Rational muu = origin_mass(u).value;
        const Rational mvv = origin_mass(v).value;
        const Rational muv = mixed_origin_mass(uv);
        for (long lam = 0; lam <= 2; ++lam) {
            const std::vector<Rational> w{q(lam), q(1)};
            const auto sum = make_sum(uv, w);
            CHECK(origin_mass(sum).value == lam * lam * muu + 2 * lam * muv + mvv);
        }
    }
}

TEST_CASE("property: origin mass is superadditive and below the Brunn-Minkowski bound") {
    for (std::size_t i = 0; i < 50; ++i) {
        Rng rng(1000 + i);
        const std::size_t n = 2 + i % 2;
        const auto u = random_convenient_expr(rng, n, 2);
        const auto v = random_convenient_expr(rng, n, 2);
        const Rational mu = origin_mass(u).value;
        const Rational mv = origin_mass(v).value;
        const Rational muv = origin_mass(make_sum(u, v)).value;
        CHECK(muv >= mu + mv);
        const std::vector<Rational> parts{mu, mv};
        CHECK(compare_root_sum_power(parts, static_cast<unsigned>(n), muv) >= 0);
    }
}

TEST_CASE("product identity examples") {
    const auto unit = product_mass_identity(ex("max(x1, x2)"), ex("max(x1, x2)"));
    CHECK(unit.hypothesis_ok);
    CHECK(unit.equal);
    REQUIRE(unit.lhs.atoms.size() == 1);
    CHECK(unit.lhs.atoms[0].mass == 1);

    const auto big = product_mass_identity(ex("max(2*x1, 3*x2)"), ex("max(4*x1, 5*x2)"));
    CHECK(big.equal);
    CHECK(big.lhs.total_mass() == 120);
    CHECK(big.lhs.atoms[0].location == neg_inf(4));

    const auto violated = product_mass_identity(ex("max(x1, x2, -1)"), ex("max(x1, x2)"));
    CHECK_FALSE(violated.hypothesis_ok);
    CHECK_FALSE(violated.violation.empty());
}

TEST_CASE("lift examples") {
    const auto four = lift_to_subvariety(ex("max(2*x1, 3*x2)"), 4);
    CHECK(four.check);
    REQUIRE(four.measure.atoms.size() == 1);
    CHECK(four.measure.atoms[0].mass == 6);
    CHECK(four.measure.atoms[0].location == neg_inf(4));

    const auto line = lift_to_subvariety(ex("x1"), 2);
    CHECK(line.check);
    CHECK(line.u == ex("max(x1, x2)"));
    CHECK(line.measure.total_mass() == 1);

    const auto gate = lift_to_subvariety(ex("max(x1, -1)"), 2);
    CHECK_FALSE(gate.hypothesis_ok);
    CHECK_FALSE(gate.check);
    CHECK_THROWS_AS(lift_to_subvariety(ex("max(x1, x2)"), 2), DimensionError);
}

TEST_CASE("partial-sum interval for two rows") {
    const auto j2 = example1_mass_interval(alternating_rows(2), 2);
    CHECK(j2.mass == q(11, 32));
    CHECK(j2.lower == q(5, 16));
    CHECK(j2.upper.lo <= 0.5625);
    CHECK(j2.upper.hi >= 0.5625);
    CHECK(j2.inside);
    // Independent covolume of the same diagram.
    CHECK(2 * covolume_2d(exps(j2.expr)) == q(11, 32));

    const auto equal_rows = example1_mass_interval({{q(1), q(1, 16)}, {q(1, 16), q(1)}}, 2);
    CHECK(equal_rows.mass == q(17, 128));
    CHECK(2 * covolume_2d(exps(equal_rows.expr)) == q(17, 128));
    CHECK(equal_rows.lower == q(1, 8));
    CHECK(equal_rows.inside);
}

TEST_CASE("partial-sum interval collapses for one row") {
    const auto one = example1_mass_interval({{q(2), q(3, 5), q(7)}}, 3);
    CHECK(one.mass == q(42, 5));
    CHECK(one.lower == one.mass);
    CHECK(one.upper_vs_mass == 0);
    CHECK(one.inside);
}

TEST_CASE("harmonic lower bound") {
    CHECK(example2_lower_bound(1, 2) == 1);
    CHECK(example2_lower_bound(4, 2) == q(25, 12));
    CHECK(example2_lower_bound(4, 4) == q(25, 12));
    Rational h = 0;
    for (long j = 1; j <= 100; ++j) {
        h += q(1, j);
    }
    CHECK(example2_lower_bound(100, 2) == h);
    CHECK(h.get_d() > 4.605);
}

TEST_CASE("per-term atom location and Mobius note") {
    const auto atoms = interior_atoms(example2_term(3, 3));
    REQUIRE(atoms.size() == 1);
    CHECK(atoms[0].location == ExtPoint{ExtRational(q(-64)), ExtRational(q(-3)), ExtRational(q(-8))});
    CHECK(atoms[0].mass == q(1, 3));
    CHECK(atoms[0].note.find("1/8") != std::string::npos);
}

TEST_CASE("measure JSON and CSV") {
    const auto m = total_measure(ex("max(2*x1, x2, x1 + x2 + 1)"));
    const auto j = to_json(m);
    CHECK(j["atoms"][0]["x"][0] == "-inf");
    CHECK(measure_from_json(nlohmann::json::parse(j.dump())).same_as(m));
    CHECK(to_csv(m, 2) == "x1,x2,mass\n-inf,-inf,2\n-1,-2,1\n");
}

TEST_CASE("property: every atom mass is positive and masses are finite") {
    for (std::size_t i = 0; i < 40; ++i) {
        Rng rng(1100 + i);
        const auto m = total_measure(random_canonical_expr(rng, 2 + i % 2, 6));
        for (const auto& a : m.atoms) {
            CHECK(sgn(a.mass) > 0);
        }
        std::set<ExtPoint> locations;
        for (const auto& a : m.atoms) {
            locations.insert(a.location);
        }
        CHECK(locations.size() == m.atoms.size());
    }
}
