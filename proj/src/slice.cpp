#include "tropma/slice.hpp"

#include <algorithm>
#include <stdexcept>

namespace tropma {

namespace {

void require_split(const TropicalExpr& e, std::size_t k) {
    if (k < 1 || k >= e.n()) {
        throw std::invalid_argument("slice split k must satisfy 1 <= k < n");
    }
}

Rational tail_sum(const Term& t, std::size_t k) {
    Rational s = 0;
    for (std::size_t i = k; i < t.exponent.size(); ++i) {
        s += t.exponent[i];
    }
    return s;
}

bool survives(const Term& t, const Stratum& s) {
    return std::all_of(s.begin(), s.end(), [&](std::size_t i) { return sgn(t.exponent[i]) == 0; });
}

}  // namespace

Rational lelong_at_origin(const TropicalExpr& e) {
    std::optional<Rational> best;
    for (const auto& t : e.terms()) {
        const auto s = tail_sum(t, 0);
        if (!best || s < *best) {
            best = s;
        }
    }
    return *best;
}

SliceLelongProfile slice_lelong_profile(const TropicalExpr& e, std::size_t k) {
    require_split(e, k);
    SliceLelongProfile p;
    p.k = k;
    std::vector<Rational> sigma;
    for (const auto& t : e.terms()) {
        sigma.push_back(tail_sum(t, k));
    }
    p.generic_value = *std::min_element(sigma.begin(), sigma.end());
    std::vector<Stratum> subsets;
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
        Stratum s;
        for (std::size_t i = 0; i < k; ++i) {
            if (mask & (std::size_t{1} << i)) {
                s.push_back(i);
            }
        }
        subsets.push_back(std::move(s));
    }
    std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    for (auto& s : subsets) {
        std::optional<Rational> nu;
        for (std::size_t t = 0; t < e.terms().size(); ++t) {
            if (survives(e.terms()[t], s) && (!nu || sigma[t] < *nu)) {
                nu = sigma[t];
            }
        }
        p.strata.push_back(SliceStratum{std::move(s), nu});
    }
    return p;
}

ESet E_set(const TropicalExpr& e, std::size_t k, const Rational& t) {
    if (sgn(t) <= 0) {
        throw std::invalid_argument("E_set: t must be positive");
    }
    const auto profile = slice_lelong_profile(e, k);
    ESet out;
    if (profile.generic_value >= t) {
        out.whole_polydisc = true;
        return out;
    }
    // Strata come smallest first, so a qualifying superset of an already
    // listed stratum adds nothing to the union.
    for (const auto& s : profile.strata) {
        if (s.nu && *s.nu < t) {
            continue;
        }
        const bool covered = std::any_of(out.strata.begin(), out.strata.end(), [&](const Stratum& m) {
            return std::includes(s.coordinates.begin(), s.coordinates.end(), m.begin(), m.end());
        });
        if (!covered) {
            out.strata.push_back(s.coordinates);
        }
    }
    return out;
}

PhiFunction::PhiFunction(TropicalExpr e, std::size_t k) : expr_(canonicalize(e)), k_(k) {
    require_split(expr_, k);
    for (const auto& t : expr_.terms()) {
        sigma_.push_back(tail_sum(t, k));
    }
    sigma_min_ = *std::min_element(sigma_.begin(), sigma_.end());
}

std::vector<Rational> PhiFunction::levels(const Point& x_prime) const {
    if (x_prime.size() != k_) {
        throw DimensionError("phi: x' must have k coordinates");
    }
    std::vector<Rational> out;
    for (const auto& t : expr_.terms()) {
        Rational level = t.constant;
        for (std::size_t i = 0; i < k_; ++i) {
            level += t.exponent[i] * x_prime[i];
        }
        out.push_back(level);
    }
    return out;
}

Rational PhiFunction::value(const Point& x_prime, const Rational& depth) const {
    if (sgn(depth) <= 0) {
        throw std::invalid_argument("phi: depth must be positive");
    }
    const auto lv = levels(x_prime);
    std::optional<Rational> best;
    for (std::size_t t = 0; t < lv.size(); ++t) {
        Rational v = lv[t] / depth - sigma_[t];
        if (!best || v > *best) {
            best = v;
        }
    }
    return *best;
}

Rational PhiFunction::stabilization_depth(const Point& x_prime) const {
    const auto lv = levels(x_prime);
    std::optional<Rational> top;
    for (std::size_t t = 0; t < lv.size(); ++t) {
        if (sigma_[t] == sigma_min_ && (!top || lv[t] > *top)) {
            top = lv[t];
        }
    }
    Rational depth = 0;
    for (std::size_t t = 0; t < lv.size(); ++t) {
        if (sigma_[t] > sigma_min_) {
            depth = std::max(depth, Rational((lv[t] - *top) / (sigma_[t] - sigma_min_)));
        }
    }
    return depth;
}

bool phi_constancy_check(const TropicalExpr& e, std::size_t k, const std::vector<Point>& grid) {
    const PhiFunction phi(e, k);
    for (const auto& x : grid) {
        if (!std::all_of(x.begin(), x.end(), [](const Rational& v) { return sgn(v) < 0; })) {
            throw std::invalid_argument("phi_constancy_check: grid points must lie in (-inf, 0)^k");
        }
        const Rational s1 = phi.stabilization_depth(x) + 1;
        const Rational s2 = 2 * s1;
        const Rational limit = (s2 * phi.value(x, s2) - s1 * phi.value(x, s1)) / (s2 - s1);
        if (limit != phi.limit_value()) {
            return false;
        }
    }
    return true;
}

bool classE_phi_zero(const TropicalExpr& e, std::size_t k) {
    require_split(e, k);
    const auto canon = canonicalize(e);
    const bool zero_block = std::any_of(canon.terms().begin(), canon.terms().end(),
                                        [&](const Term& t) { return sgn(tail_sum(t, k)) == 0; });
    const bool generic_zero = sgn(slice_lelong_profile(canon, k).generic_value) == 0;
    const bool phi_zero = sgn(PhiFunction(canon, k).limit_value()) == 0;
    if (zero_block != generic_zero || generic_zero != phi_zero) {
        throw std::logic_error("classE_phi_zero: membership criteria disagree");
    }
    return zero_block;
}

std::vector<CapacityStep> capacity_convergence_profile(const TropicalExpr& e, std::size_t k,
                                                       const std::vector<Rational>& depths, const Rational& box) {
    if (box <= 1) {
        throw std::invalid_argument("capacity_convergence_profile: box bound M must exceed 1");
    }
    for (std::size_t i = 0; i < depths.size(); ++i) {
        if (sgn(depths[i]) <= 0 || (i > 0 && depths[i] <= depths[i - 1])) {
            throw std::invalid_argument("capacity_convergence_profile: depths must be positive and increasing");
        }
    }
    const PhiFunction phi(e, k);
    const std::size_t n = phi.expr().n();
    const Rational limit = phi.limit_value();
    std::vector<CapacityStep> out;
    for (const auto& s : depths) {
        Rational worst = 0;
        for (const Rational& corner : {Rational(-box), Rational(-1 / box)}) {
            ExtPoint x(n, ExtRational(corner));
            for (std::size_t i = k; i < n; ++i) {
                x[i] = ExtRational(corner - s);
            }
            const Rational err = abs(eval(phi.expr(), x).value() / s - limit);
            worst = std::max(worst, err);
        }
        out.push_back(CapacityStep{s, worst});
    }
    return out;
}

bool toric_slice_invariant(const TropicalExpr& e, std::size_t k) {
    require_split(e, k);
    const auto measure = total_measure(canonicalize(e));
    return std::none_of(measure.atoms.begin(), measure.atoms.end(), [&](const MAAtom& a) {
        const bool head_finite =
            std::all_of(a.location.begin(), a.location.begin() + k, [](const ExtRational& v) { return v.is_finite(); });
        const bool tail_pinned =
            std::all_of(a.location.begin() + k, a.location.end(), [](const ExtRational& v) { return v.is_neg_inf(); });
        return head_finite && tail_pinned && sgn(a.mass) > 0;
    });
}

nlohmann::json to_json(const SliceLelongProfile& p) {
    nlohmann::json strata = nlohmann::json::array();
    for (const auto& s : p.strata) {
        nlohmann::json coords = nlohmann::json::array();
        for (auto i : s.coordinates) {
            coords.push_back(i + 1);
        }
        strata.push_back({{"S", coords}, {"nu", s.nu ? to_string(*s.nu) : std::string("inf")}});
    }
    return {{"generic", to_string(p.generic_value)}, {"strata", strata}};
}

nlohmann::json to_json(const ESet& e) {
    nlohmann::json strata = nlohmann::json::array();
    for (const auto& s : e.strata) {
        nlohmann::json coords = nlohmann::json::array();
        for (auto i : s) {
            coords.push_back(i + 1);
        }
        strata.push_back(coords);
    }
    return {{"all", e.whole_polydisc}, {"strata", strata}};
}

}  // namespace tropma
