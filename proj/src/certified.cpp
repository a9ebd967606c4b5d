#include "tropma/certified.hpp"

#include <mpfr.h>

#include <stdexcept>
#include <vector>

namespace tropma {

namespace {

class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;

    mpfr_ptr get() { return v_; }

private:
    mpfr_t v_;
};

struct Group {
    Rational base;   // r
    Rational coeff;  // Q, so the group contributes Q * r^{1/n}
};

std::vector<Group> group_roots(std::span<const Rational> values, unsigned n) {
    std::vector<Group> groups;
    for (const auto& v : values) {
        if (sgn(v) < 0) {
            throw std::invalid_argument("compare_root_sum_power: negative value");
        }
        if (sgn(v) == 0) {
            continue;
        }
        bool placed = false;
        for (auto& g : groups) {
            if (auto q = exact_root(Rational(v / g.base), n)) {
                g.coeff += *q;
                placed = true;
                break;
            }
        }
        if (!placed) {
            groups.push_back(Group{v, Rational(1)});
        }
    }
    return groups;
}

// Bound on sum_g Q_g r_g^{1/n}, raised to the n-th power, rounding in `rnd`.
void bound(const std::vector<Group>& groups, unsigned n, mpfr_rnd_t rnd, mpfr_prec_t prec, mpfr_ptr out) {
    Mpfr term(prec);
    Mpfr tmp(prec);
    mpfr_set_zero(out, 1);
    for (const auto& g : groups) {
        mpfr_set_q(tmp.get(), g.base.get_mpq_t(), rnd);
        mpfr_rootn_ui(tmp.get(), tmp.get(), n, rnd);
        mpfr_set_q(term.get(), g.coeff.get_mpq_t(), rnd);
        mpfr_mul(term.get(), term.get(), tmp.get(), rnd);
        mpfr_add(out, out, term.get(), rnd);
    }
    mpfr_pow_ui(out, out, n, rnd);
}

}  // namespace

std::optional<Rational> exact_root(const Rational& v, unsigned n) {
    if (sgn(v) < 0) {
        return std::nullopt;
    }
    mpz_class num;
    mpz_class den;
    if (mpz_root(num.get_mpz_t(), v.get_num_mpz_t(), n) == 0) {
        return std::nullopt;
    }
    if (mpz_root(den.get_mpz_t(), v.get_den_mpz_t(), n) == 0) {
        return std::nullopt;
    }
    return Rational(num, den);
}

int compare_root_sum_power(std::span<const Rational> values, unsigned n, const Rational& target) {
    if (n == 0) {
        throw std::invalid_argument("compare_root_sum_power: n must be positive");
    }
    const auto groups = group_roots(values, n);
    if (groups.empty()) {
        return -sgn(target);
    }
    if (groups.size() == 1) {
        Rational power = 1;
        for (unsigned i = 0; i < n; ++i) {
            power *= groups[0].coeff;
        }
        return cmp(Rational(power * groups[0].base), target);
    }
    // Distinct n-th-power classes: the power sum is irrational, so a strict
    // inequality is eventually certified.
    for (mpfr_prec_t prec = 128; prec <= (1 << 16); prec *= 2) {
        Mpfr lo(prec);
        Mpfr hi(prec);
        bound(groups, n, MPFR_RNDD, prec, lo.get());
        bound(groups, n, MPFR_RNDU, prec, hi.get());
        if (mpfr_cmp_q(lo.get(), target.get_mpq_t()) > 0) {
            return 1;
        }
        if (mpfr_cmp_q(hi.get(), target.get_mpq_t()) < 0) {
            return -1;
        }
    }
    throw std::runtime_error("compare_root_sum_power: undecided at maximum precision");
}

Enclosure root_sum_power_enclosure(std::span<const Rational> values, unsigned n) {
    const auto groups = group_roots(values, n);
    const mpfr_prec_t prec = 256;
    Mpfr lo(prec);
    Mpfr hi(prec);
    bound(groups, n, MPFR_RNDD, prec, lo.get());
    bound(groups, n, MPFR_RNDU, prec, hi.get());
    return Enclosure{mpfr_get_d(lo.get(), MPFR_RNDD), mpfr_get_d(hi.get(), MPFR_RNDU)};
}

}  // namespace tropma
