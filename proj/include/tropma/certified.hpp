#pragma once

#include "tropma/rational.hpp"

#include <span>

namespace tropma {

/// Outward-rounded double enclosure of a real number.
struct Enclosure {
    double lo;
    double hi;
};

/// Certified sign of (sum_i v_i^{1/n})^n - target for v_i >= 0.
///
/// Values whose ratios are perfect n-th powers are grouped so that ties
/// (e.g. homothetic simplices) are decided exactly; remaining cases are
/// resolved with directed-rounding MPFR at increasing precision.
int compare_root_sum_power(std::span<const Rational> values, unsigned n, const Rational& target);

Enclosure root_sum_power_enclosure(std::span<const Rational> values, unsigned n);

/// Exact n-th root when v is the n-th power of a rational.
std::optional<Rational> exact_root(const Rational& v, unsigned n);

}  // namespace tropma
