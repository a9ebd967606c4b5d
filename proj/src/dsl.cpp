#include "tropma/dsl.hpp"

#include <cctype>
#include <memory>
#include <sstream>
#include <vector>

namespace tropma {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(message + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
      line_(line),
      column_(column) {}

namespace {

struct Node {
    enum class Kind { constant, variable, max, sum, scaled } kind;
    Rational value;        // constant value, variable coefficient, or scale factor
    std::size_t index = 0; // variable, 0-based
    std::vector<std::unique_ptr<Node>> children;
    std::size_t offset = 0;
};

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    std::unique_ptr<Node> parse() {
        auto node = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return node;
    }

    std::size_t max_index() const { return max_index_; }

    [[noreturn]] void fail(const std::string& what) const { fail_at(what, pos_); }

    [[noreturn]] void fail_at(const std::string& what, std::size_t at) const {
        std::size_t line = 1;
        std::size_t col = 1;
        for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(what, line, col);
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    bool at_number() {
        skip_ws();
        if (pos_ >= text_.size()) {
            return false;
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return true;
        }
        if (c == '-' && pos_ + 1 < text_.size()) {
            const char d = text_[pos_ + 1];
            return std::isdigit(static_cast<unsigned char>(d)) || d == '.';
        }
        return false;
    }

    Rational number() {
        skip_ws();
        const std::size_t start = pos_;
        if (text_[pos_] == '-') {
            ++pos_;
        }
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == '/' || text_[pos_] == '.')) {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
        }
        try {
            return parse_rational(text_.substr(start, pos_ - start));
        } catch (const std::invalid_argument& e) {
            fail_at(e.what(), start);
        }
    }

    std::unique_ptr<Node> parse_sum() {
        std::vector<std::unique_ptr<Node>> parts;
        parts.push_back(parse_product());
        while (true) {
            if (accept('+')) {
                parts.push_back(parse_product());
            } else if (peek('-')) {
                ++pos_;
                const std::size_t at = pos_;
                auto rhs = parse_product();
                if (rhs->kind != Node::Kind::constant) {
                    fail_at("only a constant may be subtracted", at);
                }
                rhs->value = -rhs->value;
                parts.push_back(std::move(rhs));
            } else {
                break;
            }
        }
        if (parts.size() == 1) {
            return std::move(parts.front());
        }
        auto node = std::make_unique<Node>();
        node->kind = Node::Kind::sum;
        node->children = std::move(parts);
        return node;
    }

    std::unique_ptr<Node> parse_product() {
        skip_ws();
        const std::size_t at = pos_;
        if (at_number()) {
            Rational r = number();
            if (accept('*')) {
                auto inner = parse_product();
                if (sgn(r) < 0 && inner->kind != Node::Kind::constant) {
                    fail_at("negative multiplier on a non-constant expression", at);
                }
                if (inner->kind == Node::Kind::variable) {
                    inner->value *= r;
                    return inner;
                }
                if (inner->kind == Node::Kind::constant) {
                    inner->value *= r;
                    return inner;
                }
                auto node = std::make_unique<Node>();
                node->kind = Node::Kind::scaled;
                node->value = r;
                node->children.push_back(std::move(inner));
                node->offset = at;
                return node;
            }
            auto node = std::make_unique<Node>();
            node->kind = Node::Kind::constant;
            node->value = r;
            return node;
        }
        return parse_atom();
    }

    std::unique_ptr<Node> parse_atom() {
        skip_ws();
        const std::size_t at = pos_;
        if (text_.substr(pos_, 3) == "max") {
            pos_ += 3;
            expect('(');
            auto node = std::make_unique<Node>();
            node->kind = Node::Kind::max;
            node->children.push_back(parse_sum());
            while (accept(',')) {
                node->children.push_back(parse_sum());
            }
            expect(')');
            return node;
        }
        if (accept('(')) {
            auto node = parse_sum();
            expect(')');
            return node;
        }
        if (pos_ < text_.size() && text_[pos_] == 'x') {
            ++pos_;
            const std::size_t digits = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            if (pos_ == digits) {
                fail_at("expected a variable index after 'x'", digits);
            }
            const auto idx = std::stoul(std::string(text_.substr(digits, pos_ - digits)));
            if (idx == 0) {
                fail_at("variables are numbered from x1", at);
            }
            max_index_ = std::max<std::size_t>(max_index_, idx);
            auto node = std::make_unique<Node>();
            node->kind = Node::Kind::variable;
            node->index = idx - 1;
            node->value = 1;
            return node;
        }
        if (pos_ >= text_.size()) {
            fail("unexpected end of input");
        }
        fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t max_index_ = 0;
};

TropicalExpr build(const Node& node, std::size_t n) {
    switch (node.kind) {
    case Node::Kind::constant:
        return TropicalExpr::constant(n, node.value);
    case Node::Kind::variable:
        if (sgn(node.value) < 0) {
            throw std::invalid_argument("negative slope on x" + std::to_string(node.index + 1));
        }
        return TropicalExpr::variable(n, node.index, node.value);
    case Node::Kind::max: {
        std::vector<TropicalExpr> parts;
        for (const auto& c : node.children) {
            parts.push_back(build(*c, n));
        }
        return make_max(parts);
    }
    case Node::Kind::sum: {
        std::vector<TropicalExpr> parts;
        for (const auto& c : node.children) {
            parts.push_back(build(*c, n));
        }
        return make_sum(parts);
    }
    case Node::Kind::scaled:
        return scale(build(*node.children.front(), n), node.value);
    }
    throw std::logic_error("unreachable");
}

std::string term_text(const Term& t) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < t.exponent.size(); ++i) {
        if (sgn(t.exponent[i]) == 0) {
            continue;
        }
        if (!first) {
            os << " + ";
        }
        first = false;
        if (t.exponent[i] != 1) {
            os << to_string(t.exponent[i]) << "*";
        }
        os << "x" << (i + 1);
    }
    if (first) {
        os << to_string(t.constant);
    } else if (sgn(t.constant) > 0) {
        os << " + " << to_string(t.constant);
    } else if (sgn(t.constant) < 0) {
        os << " - " << to_string(Rational(-t.constant));
    }
    return os.str();
}

Rational rational_from_json(const nlohmann::json& j) {
    if (j.is_string()) {
        return parse_rational(j.get<std::string>());
    }
    if (j.is_number_integer()) {
        return Rational(j.get<long>());
    }
    throw std::invalid_argument("rationals must be strings \"p/q\" or integers");
}

}  // namespace

TropicalExpr parse_expr(std::string_view text, std::size_t n_hint) {
    Parser parser(text);
    auto root = parser.parse();
    const std::size_t n = std::max(n_hint, parser.max_index());
    if (n == 0) {
        throw ParseError("expression mentions no variable; give the dimension explicitly", 1, 1);
    }
    try {
        return canonicalize(build(*root, n));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), 1, 1);
    }
}

std::string to_dsl(const TropicalExpr& e) {
    if (e.terms().size() == 1) {
        return term_text(e.terms().front());
    }
    std::string out = "max(";
    for (std::size_t i = 0; i < e.terms().size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += term_text(e.terms()[i]);
    }
    return out + ")";
}

nlohmann::json to_json(const TropicalExpr& e) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : e.terms()) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& v : t.exponent) {
            a.push_back(to_string(v));
        }
        terms.push_back({{"a", a}, {"c", to_string(t.constant)}});
    }
    nlohmann::json tags = nlohmann::json::array();
    for (const auto& tag : e.tags()) {
        tags.push_back({{"var", tag.variable + 1}, {"center", to_string(tag.center)}});
    }
    return {{"n", e.n()}, {"terms", terms}, {"tags", tags}};
}

TropicalExpr expr_from_json(const nlohmann::json& j) {
    const auto n = j.at("n").get<std::size_t>();
    std::vector<Term> terms;
    for (const auto& t : j.at("terms")) {
        Term term;
        for (const auto& v : t.at("a")) {
            term.exponent.push_back(rational_from_json(v));
        }
        term.constant = t.contains("c") ? rational_from_json(t.at("c")) : Rational(0);
        terms.push_back(std::move(term));
    }
    std::vector<MobiusTag> tags;
    if (j.contains("tags")) {
        for (const auto& tag : j.at("tags")) {
            const auto var = tag.at("var").get<std::size_t>();
            if (var == 0) {
                throw std::invalid_argument("tag variables are numbered from 1");
            }
            tags.push_back(MobiusTag{var - 1, rational_from_json(tag.at("center"))});
        }
    }
    return TropicalExpr(n, std::move(terms), std::move(tags));
}

}  // namespace tropma
