#include "tropma/expr.hpp"

#include "tropma/linalg.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace tropma {

namespace {

std::vector<MobiusTag> merge_tags(std::span<const TropicalExpr> exprs) {
    std::map<std::size_t, Rational> by_var;
    for (const auto& e : exprs) {
        for (const auto& t : e.tags()) {
            auto [it, inserted] = by_var.emplace(t.variable, t.center);
            if (!inserted && it->second != t.center) {
                throw std::invalid_argument("conflicting Mobius tags on variable x" +
                                            std::to_string(t.variable + 1));
            }
        }
    }
    std::vector<MobiusTag> out;
    for (auto& [var, center] : by_var) {
        out.push_back(MobiusTag{var, center});
    }
    return out;
}

void check_same_n(std::span<const TropicalExpr> exprs) {
    for (const auto& e : exprs) {
        if (e.n() != exprs.front().n()) {
            throw DimensionError("dimension mismatch: expression over " + std::to_string(e.n()) +
                                 " variables combined with one over " + std::to_string(exprs.front().n()));
        }
    }
}

bool dominates(const Term& s, const Term& t) {
    // s >= t everywhere on x < 0
    if (s.constant < t.constant) {
        return false;
    }
    for (std::size_t i = 0; i < s.exponent.size(); ++i) {
        if (s.exponent[i] > t.exponent[i]) {
            return false;
        }
    }
    return true;
}

TropicalExpr product_pair(const TropicalExpr& a, const TropicalExpr& b) {
    std::vector<Term> terms;
    terms.reserve(a.terms().size() * b.terms().size());
    for (const auto& s : a.terms()) {
        for (const auto& t : b.terms()) {
            Term sum{s.exponent, s.constant + t.constant};
            for (std::size_t i = 0; i < sum.exponent.size(); ++i) {
                sum.exponent[i] += t.exponent[i];
            }
            terms.push_back(std::move(sum));
        }
    }
    const TropicalExpr pair[] = {a, b};
    return canonicalize(TropicalExpr(a.n(), std::move(terms), merge_tags(pair)));
}

}  // namespace

bool term_less(const Term& a, const Term& b) {
    if (a.exponent != b.exponent) {
        return lex_less(a.exponent, b.exponent);
    }
    return a.constant < b.constant;
}

TropicalExpr::TropicalExpr(std::size_t n, std::vector<Term> terms, std::vector<MobiusTag> tags)
    : n_(n), terms_(std::move(terms)), tags_(std::move(tags)) {
    if (n_ == 0) {
        throw std::invalid_argument("TropicalExpr: need at least one variable");
    }
    if (terms_.empty()) {
        throw std::invalid_argument("TropicalExpr: need at least one term");
    }
    for (const auto& t : terms_) {
        if (t.exponent.size() != n_) {
            throw DimensionError("TropicalExpr: term has " + std::to_string(t.exponent.size()) +
                                 " exponents, expected " + std::to_string(n_));
        }
        for (std::size_t i = 0; i < n_; ++i) {
            if (sgn(t.exponent[i]) < 0) {
                throw std::invalid_argument("TropicalExpr: negative slope on x" + std::to_string(i + 1));
            }
        }
    }
    std::sort(terms_.begin(), terms_.end(), term_less);
    terms_.erase(std::unique(terms_.begin(), terms_.end()), terms_.end());
    std::sort(tags_.begin(), tags_.end(), [](const auto& a, const auto& b) { return a.variable < b.variable; });
    for (std::size_t i = 0; i < tags_.size(); ++i) {
        const auto& tag = tags_[i];
        if (tag.variable >= n_) {
            throw DimensionError("Mobius tag on x" + std::to_string(tag.variable + 1) + " outside " +
                                 std::to_string(n_) + " variables");
        }
        if (sgn(tag.center) <= 0 || tag.center >= 1) {
            throw std::invalid_argument("Mobius center must lie in (0, 1)");
        }
        if (i > 0 && tags_[i - 1].variable == tag.variable) {
            throw std::invalid_argument("more than one Mobius tag on x" + std::to_string(tag.variable + 1));
        }
    }
}

TropicalExpr TropicalExpr::variable(std::size_t n, std::size_t index, const Rational& coefficient) {
    if (index >= n) {
        throw DimensionError("variable x" + std::to_string(index + 1) + " outside " + std::to_string(n) +
                             " variables");
    }
    Point a(n, Rational(0));
    a[index] = coefficient;
    return TropicalExpr(n, {Term{std::move(a), Rational(0)}});
}

TropicalExpr TropicalExpr::constant(std::size_t n, const Rational& value) {
    return TropicalExpr(n, {Term{Point(n, Rational(0)), value}});
}

TropicalExpr make_max(std::span<const TropicalExpr> exprs) {
    if (exprs.empty()) {
        throw std::invalid_argument("make_max: no operands");
    }
    check_same_n(exprs);
    std::vector<Term> terms;
    for (const auto& e : exprs) {
        terms.insert(terms.end(), e.terms().begin(), e.terms().end());
    }
    return canonicalize(TropicalExpr(exprs.front().n(), std::move(terms), merge_tags(exprs)));
}

TropicalExpr make_max(const TropicalExpr& a, const TropicalExpr& b) {
    const TropicalExpr pair[] = {a, b};
    return make_max(pair);
}

TropicalExpr make_sum(std::span<const TropicalExpr> exprs, std::span<const Rational> weights) {
    if (exprs.empty()) {
        throw std::invalid_argument("make_sum: no operands");
    }
    if (!weights.empty() && weights.size() != exprs.size()) {
        throw std::invalid_argument("make_sum: weight count differs from operand count");
    }
    check_same_n(exprs);
    auto weighted = [&](std::size_t i) {
        return weights.empty() ? canonicalize(exprs[i]) : scale(exprs[i], weights[i]);
    };
    TropicalExpr acc = weighted(0);
    for (std::size_t i = 1; i < exprs.size(); ++i) {
        acc = product_pair(acc, weighted(i));
    }
    return acc;
}

TropicalExpr make_sum(const TropicalExpr& a, const TropicalExpr& b) {
    const TropicalExpr pair[] = {a, b};
    return make_sum(pair);
}

TropicalExpr scale(const TropicalExpr& e, const Rational& lambda) {
    if (sgn(lambda) < 0) {
        throw std::invalid_argument("scale: negative weight");
    }
    if (sgn(lambda) == 0) {
        return TropicalExpr::constant(e.n(), 0);
    }
    std::vector<Term> terms = e.terms();
    for (auto& t : terms) {
        for (auto& a : t.exponent) {
            a *= lambda;
        }
        t.constant *= lambda;
    }
    return canonicalize(TropicalExpr(e.n(), std::move(terms), e.tags()));
}

TropicalExpr canonicalize(const TropicalExpr& e) {
    const std::size_t n = e.n();
    // Keep the largest constant per exponent (terms are sorted by exponent, then constant).
    std::vector<Term> terms;
    for (const auto& t : e.terms()) {
        if (!terms.empty() && terms.back().exponent == t.exponent) {
            terms.back() = t;
        } else {
            terms.push_back(t);
        }
    }
    // Cheap pairwise domination first.
    std::vector<bool> keep(terms.size(), true);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        for (std::size_t j = 0; j < terms.size() && keep[i]; ++j) {
            if (i != j && keep[j] && dominates(terms[j], terms[i])) {
                keep[i] = false;
            }
        }
    }
    std::vector<Term> survivors;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (keep[i]) {
            survivors.push_back(std::move(terms[i]));
        }
    }
    if (survivors.size() > 2) {
        std::vector<Point> rays;
        for (std::size_t i = 0; i < n; ++i) {
            Point r(n + 1, Rational(0));
            r[i] = 1;
            rays.push_back(std::move(r));
        }
        Point down(n + 1, Rational(0));
        down[n] = -1;
        rays.push_back(std::move(down));

        std::vector<Point> lifted;
        for (const auto& t : survivors) {
            Point p = t.exponent;
            p.push_back(t.constant);
            lifted.push_back(std::move(p));
        }
        std::vector<Term> exposed;
        for (std::size_t i = 0; i < survivors.size(); ++i) {
            std::vector<Point> others;
            for (std::size_t j = 0; j < lifted.size(); ++j) {
                if (j != i) {
                    others.push_back(lifted[j]);
                }
            }
            if (!in_conv_plus_cone(lifted[i], others, rays)) {
                exposed.push_back(survivors[i]);
            }
        }
        survivors = std::move(exposed);
    }
    return TropicalExpr(n, std::move(survivors), e.tags());
}

ExtRational eval(const TropicalExpr& e, const ExtPoint& x) {
    if (x.size() != e.n()) {
        throw DimensionError("eval: point has " + std::to_string(x.size()) + " coordinates, expected " +
                             std::to_string(e.n()));
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i].is_finite() && sgn(x[i].value()) > 0) {
            throw std::domain_error("eval: positive log-coordinate x" + std::to_string(i + 1) +
                                    " lies outside the unit polydisc");
        }
    }
    ExtRational best = ExtRational::neg_inf();
    for (const auto& t : e.terms()) {
        Rational v = t.constant;
        bool killed = false;
        for (std::size_t i = 0; i < x.size() && !killed; ++i) {
            if (sgn(t.exponent[i]) == 0) {
                continue;
            }
            if (x[i].is_neg_inf()) {
                killed = true;
            } else {
                v += t.exponent[i] * x[i].value();
            }
        }
        if (!killed && (best.is_neg_inf() || v > best.value())) {
            best = ExtRational(v);
        }
    }
    return best;
}

TropicalExpr recession(const TropicalExpr& e) {
    std::vector<Term> terms;
    for (const auto& t : e.terms()) {
        terms.push_back(Term{t.exponent, Rational(0)});
    }
    return TropicalExpr(e.n(), std::move(terms), e.tags());
}

SliceResult substitute_slice(const TropicalExpr& e,
                             const std::vector<std::pair<std::size_t, ExtRational>>& fixed) {
    const std::size_t n = e.n();
    std::vector<std::optional<ExtRational>> value(n);
    for (const auto& [idx, v] : fixed) {
        if (idx >= n) {
            throw DimensionError("substitute_slice: variable x" + std::to_string(idx + 1) + " outside " +
                                 std::to_string(n) + " variables");
        }
        if (v.is_finite() && sgn(v.value()) > 0) {
            throw std::domain_error("substitute_slice: positive log-coordinate for x" + std::to_string(idx + 1));
        }
        value[idx] = v;
    }
    std::vector<std::size_t> remaining;
    std::vector<std::size_t> new_index(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!value[i]) {
            new_index[i] = remaining.size();
            remaining.push_back(i);
        }
    }
    if (remaining.empty()) {
        throw std::invalid_argument("substitute_slice: every variable fixed");
    }
    std::vector<Term> terms;
    for (const auto& t : e.terms()) {
        Term out{Point(remaining.size(), Rational(0)), t.constant};
        bool killed = false;
        for (std::size_t i = 0; i < n && !killed; ++i) {
            if (!value[i]) {
                out.exponent[new_index[i]] = t.exponent[i];
            } else if (sgn(t.exponent[i]) != 0) {
                if (value[i]->is_neg_inf()) {
                    killed = true;
                } else {
                    out.constant += t.exponent[i] * value[i]->value();
                }
            }
        }
        if (!killed) {
            terms.push_back(std::move(out));
        }
    }
    if (terms.empty()) {
        return IdenticallyNegInf{};
    }
    std::vector<MobiusTag> tags;
    for (const auto& tag : e.tags()) {
        if (!value[tag.variable]) {
            tags.push_back(MobiusTag{new_index[tag.variable], tag.center});
        }
    }
    return canonicalize(TropicalExpr(remaining.size(), std::move(terms), std::move(tags)));
}

TropicalExpr embed(const TropicalExpr& e, std::size_t total, std::size_t offset) {
    if (offset + e.n() > total) {
        throw DimensionError("embed: " + std::to_string(e.n()) + " variables at offset " + std::to_string(offset) +
                             " exceed " + std::to_string(total));
    }
    std::vector<Term> terms;
    for (const auto& t : e.terms()) {
        Term out{Point(total, Rational(0)), t.constant};
        for (std::size_t i = 0; i < e.n(); ++i) {
            out.exponent[offset + i] = t.exponent[i];
        }
        terms.push_back(std::move(out));
    }
    std::vector<MobiusTag> tags;
    for (const auto& tag : e.tags()) {
        tags.push_back(MobiusTag{tag.variable + offset, tag.center});
    }
    return TropicalExpr(total, std::move(terms), std::move(tags));
}

TropicalExpr join_max(const TropicalExpr& u1, const TropicalExpr& u2) {
    const std::size_t total = u1.n() + u2.n();
    return make_max(embed(u1, total, 0), embed(u2, total, u1.n()));
}

}  // namespace tropma
