#pragma once

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace tropma {

using Rational = mpq_class;
using Point = std::vector<Rational>;

/// Parses "p/q", an integer, or a finite decimal such as "-0.125".
/// Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

/// Canonical string form: "p" when the denominator is 1, else "p/q".
std::string to_string(const Rational& value);

/// A log-coordinate: either a finite rational or -infinity.
class ExtRational {
public:
    ExtRational() = default;
    ExtRational(Rational value) : value_(std::move(value)) {}  // NOLINT(implicit)
    ExtRational(long value) : value_(Rational(value)) {}       // NOLINT(implicit)

    static ExtRational neg_inf() {
        ExtRational r;
        r.value_.reset();
        return r;
    }

    bool is_neg_inf() const { return !value_.has_value(); }
    bool is_finite() const { return value_.has_value(); }

    /// Precondition: is_finite().
    const Rational& value() const { return *value_; }

    friend bool operator==(const ExtRational& a, const ExtRational& b) {
        if (a.is_neg_inf() || b.is_neg_inf()) {
            return a.is_neg_inf() == b.is_neg_inf();
        }
        return *a.value_ == *b.value_;
    }

    friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
        if (a.is_neg_inf()) {
            return b.is_neg_inf() ? std::strong_ordering::equal : std::strong_ordering::less;
        }
        if (b.is_neg_inf()) {
            return std::strong_ordering::greater;
        }
        const int c = cmp(*a.value_, *b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    std::optional<Rational> value_ = Rational(0);
};

using ExtPoint = std::vector<ExtRational>;

/// "-inf" for -infinity, otherwise to_string of the value.
std::string to_string(const ExtRational& value);

/// Accepts everything parse_rational accepts plus "-inf".
ExtRational parse_ext_rational(std::string_view text);

std::ostream& operator<<(std::ostream& os, const ExtRational& value);

/// Lexicographic order on rational points.
bool lex_less(const Point& a, const Point& b);

Rational dot(const Point& a, const Point& b);

Rational factorial(unsigned n);

}  // namespace tropma
