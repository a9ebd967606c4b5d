#pragma once

#include "tropma/expr.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace tropma {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Grammar (whitespace insignificant):
///   expr := term | "max(" expr {"," expr} ")" | expr "+" expr | rational "*" expr
///   term := rational | [rational "*"] "x" integer
/// Accepted extensions: parentheses for grouping, and "expr - rational".
/// Variables are 1-based. The result has max(n_hint, largest index)
/// variables and is canonical.
TropicalExpr parse_expr(std::string_view text, std::size_t n_hint = 0);

/// Re-parseable text form; parse_expr(to_dsl(e)) == canonicalize(e) up to tags.
std::string to_dsl(const TropicalExpr& e);

/// {"n": int, "terms": [{"a": [rat...], "c": rat}], "tags": [{"var": int, "center": rat}]}
/// with rationals as "p/q" strings and 1-based tag variables.
nlohmann::json to_json(const TropicalExpr& e);
TropicalExpr expr_from_json(const nlohmann::json& j);

}  // namespace tropma
