#include "tropma/dsl.hpp"
#include "tropma/measure.hpp"
#include "tropma/oracle.hpp"
#include "tropma/random.hpp"

#include <doctest.h>

#include <cmath>

using namespace tropma;

namespace {

Rational q(long p, long d = 1) { return Rational(p, d); }

Point pt(std::initializer_list<Rational> xs) { return Point(xs); }

}  // namespace

TEST_CASE("Monte-Carlo covolume examples") {
    const auto a = mc_covolume(NewtonDiagram({pt({2, 0}), pt({0, 3})}), 1000000, 7);
    CHECK(a.exact == 3);
    CHECK(a.pass);
    CHECK(std::abs(a.estimate - 3.0) < 0.02);
    const auto b = mc_covolume(NewtonDiagram({pt({3, 0}), pt({1, 1}), pt({0, 2})}), 1000000, 7);
    CHECK(b.exact == q(5, 2));
    CHECK(b.pass);
    CHECK_THROWS(mc_covolume(NewtonDiagram({pt({1, 0})}), 1000, 7));
}

TEST_CASE("Monte-Carlo reports are deterministic per seed") {
    const NewtonDiagram d({pt({3, 0}), pt({1, 1}), pt({0, 2})});
    const auto a = mc_covolume(d, 100000, 42);
    const auto b = mc_covolume(d, 100000, 42);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
    CHECK(mc_covolume(d, 100000, 43).estimate != a.estimate);
}

TEST_CASE("standard error shrinks by about sqrt 2 when samples double") {
    const NewtonDiagram d({pt({3, 0}), pt({1, 1}), pt({0, 2})});
    const auto a = mc_covolume(d, 200000, 5);
    const auto b = mc_covolume(d, 400000, 5);
    const double ratio = a.std_error / b.std_error;
    CHECK(ratio > std::sqrt(2.0) * 0.8);
    CHECK(ratio < std::sqrt(2.0) * 1.2);
}

TEST_CASE("Monte-Carlo covolume in three and four variables") {
    const auto three = mc_covolume(NewtonDiagram({pt({2, 0, 0}), pt({0, 3, 0}), pt({0, 0, 1}), pt({q(1, 2), q(1, 2), 0})}),
                                   400000, 11);
    CHECK(three.pass);
    const auto four = mc_covolume(
        NewtonDiagram({pt({2, 0, 0, 0}), pt({0, 3, 0, 0}), pt({0, 0, 4, 0}), pt({0, 0, 0, 5})}), 400000, 13);
    CHECK(four.exact == 5);
    CHECK(four.pass);
}

TEST_CASE("grid estimator on an interior vertex") {
    const LogBox box{pt({-2, -2}), pt({q(-1, 2), q(-1, 2)})};
    const auto r = grid_real_ma(parse_expr("max(x1, x2, -1)"), box, 512);
    CHECK(r.exact == 1);
    CHECK(r.pass);
}

TEST_CASE("grid estimator on a box without vertices") {
    const LogBox box{pt({-5, -5}), pt({-2, -2})};
    const auto r = grid_real_ma(parse_expr("max(x1, x2, -1)"), box, 128);
    CHECK(r.exact == 0);
    CHECK(r.estimate == 0);
    CHECK(r.pass);
}

TEST_CASE("grid estimator sees no interior mass for a partial sum of maxima") {
    const auto e = example1_mass_interval(alternating_rows(3), 2).expr;
    const LogBox box{pt({-3, -3}), pt({q(-1, 10), q(-1, 10)})};
    const auto r = grid_real_ma(e, box, 256);
    CHECK(r.exact == 0);
    CHECK(r.pass);
}

TEST_CASE("grid estimator in three variables") {
    const LogBox box{pt({-1, -1, -2}), pt({q(-1, 10), q(-1, 10), q(-1, 2)})};
    const auto r = grid_real_ma(parse_expr("max(2*x1, 3*x2, -1, x3)"), box, 48);
    CHECK(r.exact == 6);
    CHECK(r.pass);
}

TEST_CASE("grid estimator on random two-variable expressions") {
    for (std::size_t i = 0; i < 8; ++i) {
        Rng rng(900 + i);
        const auto e = random_canonical_expr(rng, 2, 6);
        const LogBox box{pt({-4, -4}), pt({q(-1, 8), q(-1, 8)})};
        const auto r = grid_real_ma(e, box, 256);
        CHECK_MESSAGE(r.pass, to_dsl(e), " exact ", to_string(r.exact), " estimate ", r.estimate);
    }
}

TEST_CASE("grid estimator rejects boxes touching the boundary") {
    CHECK_THROWS(grid_real_ma(parse_expr("max(x1, x2, -1)"), LogBox{pt({-2, -2}), pt({0, -1})}, 16));
    CHECK_THROWS(grid_real_ma(parse_expr("max(x1, -1)"), LogBox{pt({-2}), pt({-1})}, 16));
}

TEST_CASE("Monte-Carlo volume of a per-term cell") {
    const auto term = example2_term(5, 2);
    std::vector<Point> pts;
    for (const auto& t : term.terms()) {
        pts.push_back(t.exponent);
    }
    const auto r = mc_volume(convex_hull(pts), 200000, 3);
    CHECK(r.exact * 2 == q(1, 5));
    CHECK(r.pass);
}

TEST_CASE("report JSON") {
    const auto j = to_json(mc_covolume(NewtonDiagram({pt({2, 0}), pt({0, 3})}), 1000, 1));
    CHECK(j["exact"] == "3");
    CHECK(j["seed"] == 1);
    CHECK((j["verdict"] == "pass" || j["verdict"] == "fail"));
}
