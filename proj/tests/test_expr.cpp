#include "tropma/dsl.hpp"
#include "tropma/expr.hpp"
#include "tropma/random.hpp"

#include <doctest.h>

using namespace tropma;

namespace {

Rational q(long p, long d = 1) { return Rational(p, d); }

TropicalExpr ex(const char* s, std::size_t n = 0) { return parse_expr(s, n); }

ExtPoint at(std::initializer_list<Rational> xs) { return ExtPoint(xs.begin(), xs.end()); }

std::vector<ExtPoint> random_grid(Rng& rng, std::size_t n, std::size_t count) {
    std::vector<ExtPoint> out;
    for (std::size_t i = 0; i < count; ++i) {
        ExtPoint x;
        for (std::size_t j = 0; j < n; ++j) {
            x.emplace_back(-random_rational(rng, 1, 99, 100));
        }
        out.push_back(std::move(x));
    }
    return out;
}

// Term-by-term maximum, independent of the library's eval.
Rational naive_eval(const TropicalExpr& e, const ExtPoint& x) {
    std::optional<Rational> best;
    for (const auto& t : e.terms()) {
        Rational v = t.constant;
        for (std::size_t i = 0; i < x.size(); ++i) {
            v += t.exponent[i] * x[i].value();
        }
        if (!best || v > *best) {
            best = v;
        }
    }
    return *best;
}

}  // namespace

TEST_CASE("max of two variables keeps both terms") {
    const auto e = make_max(ex("x1", 2), ex("x2", 2));
    CHECK(e.terms().size() == 2);
}

TEST_CASE("max drops a term dominated everywhere") {
    const auto e = make_max(ex("x1"), ex("x1 - 1"));
    REQUIRE(e.terms().size() == 1);
    CHECK(e.terms()[0].constant == 0);
}

TEST_CASE("max(2x1, x1 + x2) keeps both and each is strictly maximal somewhere") {
    const auto e = make_max(ex("2*x1", 2), ex("x1 + x2"));
    REQUIRE(e.terms().size() == 2);
    // At (-1,-2): 2x1 = -2 beats -3. At (-2,-1): x1 + x2 = -3 beats -4.
    CHECK(eval(e, at({q(-1), q(-2)})) == ExtRational(q(-2)));
    CHECK(eval(e, at({q(-2), q(-1)})) == ExtRational(q(-3)));
}

TEST_CASE("max rejects mismatched dimensions") {
    CHECK_THROWS_AS(make_max(ex("x1", 1), ex("x2", 2)), DimensionError);
}

TEST_CASE("sum of max(x1,x2) and max(2x1,x2) prunes (2,1)") {
    // (2,1) + t(1,0)... on x < 0 the term 2x1 + x2 is below x1 + x2 since x1 < 0.
    const auto e = make_sum(ex("max(x1, x2)"), ex("max(2*x1, x2)"));
    std::vector<Point> got;
    for (const auto& t : e.terms()) {
        got.push_back(t.exponent);
    }
    std::sort(got.begin(), got.end(), lex_less);
    CHECK(got == std::vector<Point>{{q(0), q(2)}, {q(1), q(1)}, {q(3), q(0)}});
}

TEST_CASE("sum with zero weight leaves the other summand") {
    const std::vector<TropicalExpr> parts{ex("max(x1, 2*x2 - 1)"), ex("max(3*x1, x2)")};
    const std::vector<Rational> w{q(1), q(0)};
    CHECK(make_sum(parts, w) == canonicalize(parts[0]));
}

TEST_CASE("sum of single terms is their product") {
    CHECK(make_sum(ex("x1", 2), ex("x2")) == ex("x1 + x2"));
}

TEST_CASE("sum of nothing is an error") {
    CHECK_THROWS(make_sum(std::span<const TropicalExpr>{}));
}

TEST_CASE("canonicalize examples") {
    CHECK(canonicalize(TropicalExpr(1, {Term{{q(1)}, q(0)}, Term{{q(1)}, q(-5)}})) == ex("x1"));
    const auto mid = canonicalize(TropicalExpr(2, {Term{{q(1), q(0)}, q(0)}, Term{{q(0), q(1)}, q(0)},
                                                   Term{{q(1, 2), q(1, 2)}, q(0)}}));
    CHECK(mid.terms().size() == 2);
    const auto shifted = canonicalize(ex("max(2*x1, x2, x1 + x2 + 1)"));
    CHECK(shifted.terms().size() == 3);
    // The shifted mixed term is strictly maximal near the corner.
    const auto x = at({q(-1, 4), q(-1, 4)});
    CHECK(eval(shifted, x) == ExtRational(q(1, 2)));
}

TEST_CASE("eval conventions at -inf") {
    const auto e = ex("max(x1, x2)");
    CHECK(eval(e, {ExtRational::neg_inf(), ExtRational(q(-3))}) == ExtRational(q(-3)));
    CHECK(eval(e, {ExtRational::neg_inf(), ExtRational::neg_inf()}).is_neg_inf());
    CHECK(eval(ex("max(x1, -2)"), {ExtRational::neg_inf()}) == ExtRational(q(-2)));
    CHECK_THROWS_AS(eval(e, at({q(1), q(-1)})), std::domain_error);
}

TEST_CASE("eval is -inf where every term has a positive killed exponent") {
    const auto u = make_sum(ex("max(x1, 1/4*x2)"), ex("max(1/16*x1, x1 + x2)"));
    CHECK(eval(u, {ExtRational::neg_inf(), ExtRational(q(-1))}).is_neg_inf());
}

TEST_CASE("recession drops constants") {
    CHECK(recession(ex("max(x1 - 7, 2*x2 + 3)")) == TropicalExpr(2, {Term{{q(1), q(0)}, 0}, Term{{q(0), q(2)}, 0}}));
    CHECK(recession(ex("-5", 1)) == TropicalExpr(1, {Term{{q(0)}, 0}}));
}

TEST_CASE("substitute_slice examples") {
    const auto a = substitute_slice(ex("max(x1 + x2, 3*x2)"), {{0, ExtRational(q(-2))}});
    REQUIRE(std::holds_alternative<TropicalExpr>(a));
    CHECK(std::get<TropicalExpr>(a) == ex("max(x1 - 2, 3*x1)"));
    const auto b = substitute_slice(ex("max(x1, x2)"), {{0, ExtRational::neg_inf()}});
    REQUIRE(std::holds_alternative<TropicalExpr>(b));
    CHECK(std::get<TropicalExpr>(b) == ex("x1"));
    const auto c = substitute_slice(ex("x1 + x2"), {{0, ExtRational::neg_inf()}});
    CHECK(std::holds_alternative<IdenticallyNegInf>(c));
}

TEST_CASE("substitute_slice keeps and reindexes tags") {
    const TropicalExpr e(2, {Term{{q(1), q(0)}, 0}, Term{{q(0), q(1)}, 0}}, {MobiusTag{1, q(1, 3)}});
    const auto s = substitute_slice(e, {{0, ExtRational(q(-1))}});
    REQUIRE(std::holds_alternative<TropicalExpr>(s));
    REQUIRE(std::get<TropicalExpr>(s).tags().size() == 1);
    CHECK(std::get<TropicalExpr>(s).tags()[0].variable == 0);
}

TEST_CASE("construction rejects negative exponents and bad tags") {
    CHECK_THROWS(TropicalExpr(1, {Term{{q(-1)}, 0}}));
    CHECK_THROWS(TropicalExpr(1, {Term{{q(1)}, 0}}, {MobiusTag{0, q(3, 2)}}));
    CHECK_THROWS(TropicalExpr(1, {Term{{q(1)}, 0}}, {MobiusTag{0, q(1, 2)}, MobiusTag{0, q(1, 3)}}));
    CHECK_THROWS(TropicalExpr(1, {}));
}

TEST_CASE("scale by zero is the zero function") {
    CHECK(scale(ex("max(x1, x2 - 1)"), q(0)) == TropicalExpr::constant(2, q(0)));
    CHECK(scale(ex("max(x1, x2 - 1)"), q(2)) == ex("max(2*x1, 2*x2 - 2)"));
}

TEST_CASE("DSL parse errors carry positions") {
    try {
        parse_expr("max(x1,\n  x2 +)");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 7);
    }
    CHECK_THROWS_AS(parse_expr("x0"), ParseError);
    CHECK_THROWS_AS(parse_expr("max()"), ParseError);
    CHECK_THROWS_AS(parse_expr("-2*x1"), ParseError);
    CHECK_THROWS_AS(parse_expr("1/0"), std::exception);
}

TEST_CASE("DSL accepts decimals, grouping and scalar multiples") {
    CHECK(parse_expr("0.5*x1") == parse_expr("1/2*x1"));
    CHECK(parse_expr("2*max(x1, x2)") == parse_expr("max(2*x1, 2*x2)"));
    CHECK(parse_expr("(max(x1, x2) + x1) - 1") == parse_expr("max(2*x1 - 1, x1 + x2 - 1)"));
    CHECK(parse_expr("x1", 3).n() == 3);
}

TEST_CASE("property: canonicalize is idempotent and preserves values") {
    for (std::size_t i = 0; i < 60; ++i) {
        Rng rng(1000 + i);
        const std::size_t n = 1 + i % 3;
        std::vector<Term> terms;
        for (std::size_t t = 0; t < 7; ++t) {
            Term term{Point(n), -random_rational(rng, 0, 4, 3)};
            for (auto& a : term.exponent) {
                a = random_rational(rng, 0, 3, 2);
            }
            terms.push_back(std::move(term));
        }
        const TropicalExpr raw(n, terms);
        const auto c = canonicalize(raw);
        CHECK(canonicalize(c) == c);
        for (const auto& x : random_grid(rng, n, 100)) {
            CHECK(eval(c, x) == ExtRational(naive_eval(raw, x)));
        }
    }
}

TEST_CASE("property: every kept term is strictly maximal somewhere") {
    // Independent exposure witness: a term survives only if some sampled
    // point makes it the unique maximiser, or it is needed to preserve values.
    for (std::size_t i = 0; i < 30; ++i) {
        Rng rng(2000 + i);
        const auto e = random_canonical_expr(rng, 2, 6);
        for (std::size_t t = 0; t < e.terms().size(); ++t) {
            const TropicalExpr others = [&] {
                std::vector<Term> rest;
                for (std::size_t s = 0; s < e.terms().size(); ++s) {
                    if (s != t) {
                        rest.push_back(e.terms()[s]);
                    }
                }
                return rest.empty() ? TropicalExpr::constant(2, q(-1000000)) : TropicalExpr(2, rest);
            }();
            bool differs = false;
            for (const auto& x : random_grid(rng, 2, 400)) {
                differs = differs || naive_eval(others, x) != naive_eval(e, x);
            }
            for (long a = 1; a <= 64 && !differs; a *= 2) {
                for (long b = 1; b <= 64 && !differs; b *= 2) {
                    const ExtPoint x{ExtRational(q(-a, 64)), ExtRational(q(-b, 64))};
                    differs = naive_eval(others, x) != naive_eval(e, x);
                    const ExtPoint y{ExtRational(q(-a * 64)), ExtRational(q(-b * 64))};
                    differs = differs || naive_eval(others, y) != naive_eval(e, y);
                }
            }
            CHECK_MESSAGE(differs, to_dsl(e), " term ", t);
        }
    }
}

TEST_CASE("property: make_sum is associative and commutative") {
    for (std::size_t i = 0; i < 20; ++i) {
        Rng rng(3000 + i);
        const auto a = random_canonical_expr(rng, 2, 4);
        const auto b = random_canonical_expr(rng, 2, 4);
        const auto c = random_canonical_expr(rng, 2, 4);
        CHECK(make_sum(a, b) == make_sum(b, a));
        CHECK(make_sum(make_sum(a, b), c) == make_sum(a, make_sum(b, c)));
    }
}

TEST_CASE("property: eval is monotone and midpoint convex") {
    for (std::size_t i = 0; i < 30; ++i) {
        Rng rng(4000 + i);
        const auto e = random_canonical_expr(rng, 3, 5);
        const auto xs = random_grid(rng, 3, 20);
        const auto ys = random_grid(rng, 3, 20);
        for (std::size_t p = 0; p < xs.size(); ++p) {
            ExtPoint lo(3);
            ExtPoint mid(3);
            for (std::size_t j = 0; j < 3; ++j) {
                lo[j] = std::min(xs[p][j], ys[p][j]);
                mid[j] = ExtRational((xs[p][j].value() + ys[p][j].value()) / 2);
            }
            CHECK(eval(e, lo) <= eval(e, xs[p]));
            CHECK(eval(e, mid).value() * 2 <= eval(e, xs[p]).value() + eval(e, ys[p]).value());
        }
    }
}

TEST_CASE("property: recession commutes with sums") {
    for (std::size_t i = 0; i < 20; ++i) {
        Rng rng(5000 + i);
        const auto a = random_canonical_expr(rng, 3, 4);
        const auto b = random_canonical_expr(rng, 3, 4);
        CHECK(canonicalize(recession(make_sum(a, b))) == make_sum(recession(a), recession(b)));
    }
}

TEST_CASE("property: DSL and JSON round trips") {
    for (std::size_t i = 0; i < 40; ++i) {
        Rng rng(6000 + i);
        const auto e = random_canonical_expr(rng, 1 + i % 4, 6);
        CHECK(parse_expr(to_dsl(e), e.n()) == e);
        CHECK(expr_from_json(to_json(e)) == e);
        CHECK(expr_from_json(nlohmann::json::parse(to_json(e).dump())) == e);
    }
    const TropicalExpr tagged(2, {Term{{q(1, 2), q(0)}, 0}, Term{{q(0), q(3)}, q(-4)}}, {MobiusTag{0, q(1, 2)}});
    const auto j = to_json(tagged);
    CHECK(j["tags"][0]["var"] == 1);
    CHECK(j["tags"][0]["center"] == "1/2");
    CHECK(expr_from_json(j) == tagged);
}
