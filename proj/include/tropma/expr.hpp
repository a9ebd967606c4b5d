#pragma once

#include "tropma/rational.hpp"

#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

namespace tropma {

/// Thrown when expressions over different variable counts are combined.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// One affine piece c + <a, x> in log-coordinates x_i = log|z_i|.
struct Term {
    Point exponent;  // a, every entry >= 0
    Rational constant;

    bool operator==(const Term&) const = default;
};

bool term_less(const Term& a, const Term& b);

/// Annotates variable `variable` (0-based) as log|(z - b)/(1 - b z)| with
/// b = center in (0, 1). Affects reported atom locations only.
struct MobiusTag {
    std::size_t variable;
    Rational center;

    bool operator==(const MobiusTag&) const = default;
};

/// g(x) = max over terms of (c + <a, x>): the log-coordinate profile of a
/// toric plurisubharmonic function on the unit polydisc. Immutable.
///
/// Terms are kept sorted and free of exact duplicates; they are not pruned
/// unless the value came out of canonicalize() (or an operation that calls it).
class TropicalExpr {
public:
    TropicalExpr(std::size_t n, std::vector<Term> terms, std::vector<MobiusTag> tags = {});

    static TropicalExpr variable(std::size_t n, std::size_t index, const Rational& coefficient = 1);
    static TropicalExpr constant(std::size_t n, const Rational& value);

    std::size_t n() const { return n_; }
    const std::vector<Term>& terms() const { return terms_; }
    const std::vector<MobiusTag>& tags() const { return tags_; }

    bool operator==(const TropicalExpr&) const = default;

private:
    std::size_t n_;
    std::vector<Term> terms_;
    std::vector<MobiusTag> tags_;
};

/// Marker returned when a slice kills every term (u is identically -inf there).
struct IdenticallyNegInf {
    bool operator==(const IdenticallyNegInf&) const = default;
};

using SliceResult = std::variant<TropicalExpr, IdenticallyNegInf>;

TropicalExpr make_max(std::span<const TropicalExpr> exprs);
TropicalExpr make_max(const TropicalExpr& a, const TropicalExpr& b);

/// Weighted tropical product: exponents and constants add, one term per
/// input. Empty `weights` means all ones. Pruned after every pairwise step.
TropicalExpr make_sum(std::span<const TropicalExpr> exprs, std::span<const Rational> weights = {});
TropicalExpr make_sum(const TropicalExpr& a, const TropicalExpr& b);

/// lambda * g for lambda >= 0; lambda = 0 gives the zero function.
TropicalExpr scale(const TropicalExpr& e, const Rational& lambda);

/// Removes every term that is not strictly maximal somewhere on (-inf, 0)^n.
/// A term is kept iff its lifted point (a, c) is a vertex of
/// conv{(a_s, c_s)} + (R^n_{>=0} x R_{<=0}), decided by an exact LP.
TropicalExpr canonicalize(const TropicalExpr& e);

/// Convention a * (-inf) = -inf for a > 0 and 0 for a = 0.
/// Throws std::domain_error on a positive coordinate.
ExtRational eval(const TropicalExpr& e, const ExtPoint& x);

/// Constants set to zero, duplicate exponents merged; not pruned.
TropicalExpr recession(const TropicalExpr& e);

/// Fixes the listed variables (0-based index, value <= 0 or -inf) and
/// returns a canonical expression in the remaining variables, in order.
/// Throws std::invalid_argument when no variable would remain.
SliceResult substitute_slice(const TropicalExpr& e, const std::vector<std::pair<std::size_t, ExtRational>>& fixed);

/// Re-expresses e over `total` variables, its variable i becoming offset + i.
TropicalExpr embed(const TropicalExpr& e, std::size_t total, std::size_t offset);

/// max(u1(x_1..x_{n1}), u2(x_{n1+1}..x_{n1+n2})).
TropicalExpr join_max(const TropicalExpr& u1, const TropicalExpr& u2);

}  // namespace tropma
