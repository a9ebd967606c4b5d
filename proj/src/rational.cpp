#include "tropma/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace tropma {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    for (char ch : s) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) {
            return false;
        }
    }
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    Rational out;
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const auto num = s.substr(0, slash);
        const auto den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) {
            throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
        }
        mpz_class d{std::string(den)};
        if (d == 0) {
            throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        }
        out = Rational(mpz_class(std::string(num)), d);
        out.canonicalize();
    } else if (const auto dot_pos = s.find('.'); dot_pos != std::string_view::npos) {
        const auto whole = s.substr(0, dot_pos);
        const auto frac = s.substr(dot_pos + 1);
        if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
            (!frac.empty() && !all_digits(frac))) {
            throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
        }
        mpz_class num(whole.empty() ? std::string("0") : std::string(whole));
        mpz_class scale = 1;
        for (char ch : frac) {
            num = num * 10 + (ch - '0');
            scale *= 10;
        }
        out = Rational(num, scale);
        out.canonicalize();
    } else {
        if (!all_digits(s)) {
            throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
        }
        out = Rational(mpz_class(std::string(s)));
    }
    return negative ? Rational(-out) : out;
}

std::string to_string(const Rational& value) { return value.get_str(); }

std::string to_string(const ExtRational& value) {
    return value.is_neg_inf() ? std::string("-inf") : to_string(value.value());
}

ExtRational parse_ext_rational(std::string_view text) {
    if (text == "-inf" || text == "-Infinity" || text == "NEG_INF") {
        return ExtRational::neg_inf();
    }
    return ExtRational(parse_rational(text));
}

std::ostream& operator<<(std::ostream& os, const ExtRational& value) { return os << to_string(value); }

bool lex_less(const Point& a, const Point& b) {
    const auto m = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < m; ++i) {
        const int c = cmp(a[i], b[i]);
        if (c != 0) {
            return c < 0;
        }
    }
    return a.size() < b.size();
}

Rational dot(const Point& a, const Point& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

Rational factorial(unsigned n) {
    mpz_class f = 1;
    for (unsigned i = 2; i <= n; ++i) {
        f *= i;
    }
    return Rational(f);
}

}  // namespace tropma
