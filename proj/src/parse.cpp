#include <cctype>

#include "characteristica/expr.hpp"

namespace characteristica {

namespace {

struct Token {
    enum Kind { Number, Ident, Op, End } kind = End;
    Rational value;
    std::string text;
    char op = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    [[nodiscard]] const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg + " at offset " + std::to_string(pos_) + " in \"" + src_ + "\"");
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ >= src_.size()) {
            current_ = Token{};
            return;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            current_ = Token{Token::Ident, Rational(), src_.substr(start, pos_ - start), 0};
            return;
        }
        if (std::string("+-*/^()").find(c) != std::string::npos) {
            ++pos_;
            current_ = Token{Token::Op, Rational(), std::string(1, c), c};
            return;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    // Integer or decimal literal, read exactly as a rational.
    void lex_number() {
        std::int64_t whole = 0;
        bool any = false;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            whole = whole * 10 + (src_[pos_] - '0');
            ++pos_;
            any = true;
            if (whole < 0) fail("integer literal too large");
        }
        Rational v(whole);
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            std::int64_t frac = 0, scale = 1;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                frac = frac * 10 + (src_[pos_] - '0');
                scale *= 10;
                ++pos_;
                any = true;
                if (scale < 0) fail("decimal literal too long");
            }
            v = v + Rational(frac, scale);
        }
        if (!any) fail("malformed number");
        current_ = Token{Token::Number, v, "", 0};
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    Token current_;
};

class Parser {
public:
    Parser(const std::string& text, const VarPair& vars, const std::vector<std::string>& extra)
        : lex_(text), vars_(vars), extra_(extra) {}

    Expr run() {
        Expr e = parse_sum();
        if (lex_.peek().kind != Token::End) lex_.fail("trailing input");
        return e;
    }

private:
    [[nodiscard]] bool at_op(char c) const {
        return lex_.peek().kind == Token::Op && lex_.peek().op == c;
    }

    Expr parse_sum() {
        Expr e = parse_product();
        while (at_op('+') || at_op('-')) {
            char op = lex_.take().op;
            Expr rhs = parse_product();
            e = op == '+' ? sum_node(e, rhs) : difference_node(e, rhs);
        }
        return e;
    }

    Expr parse_product() {
        Expr e = parse_unary();
        while (at_op('*') || at_op('/')) {
            char op = lex_.take().op;
            Expr rhs = parse_unary();
            if (op == '/') {
                // A quotient of two literals is a rational literal.
                if (e->kind == NodeKind::Number && rhs->kind == NodeKind::Number) {
                    if (rhs->value.is_zero()) lex_.fail("literal division by zero");
                    e = number(e->value / rhs->value);
                } else {
                    e = quotient_node(e, rhs);
                }
            } else {
                e = product_node(e, rhs);
            }
        }
        return e;
    }

    Expr parse_unary() {
        if (at_op('-')) {
            lex_.take();
            Expr inner = parse_unary();
            // A negated literal is a negative literal.
            if (inner->kind == NodeKind::Number) return number(-inner->value);
            return negate_node(inner);
        }
        if (at_op('+')) {
            lex_.take();
            return parse_unary();
        }
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (!at_op('^')) return base;
        lex_.take();
        Expr raw = parse_unary();  // right-associative; may itself contain '^'
        auto r = rational_constant(raw);
        if (!r) lex_.fail("exponent must reduce to a rational constant");
        return power_node(base, *r);
    }

    Expr parse_primary() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Number) return number(lex_.take().value);
        if (t.kind == Token::Ident) {
            std::string name = lex_.take().text;
            if (at_op('(')) {
                auto fn = builtin_from_name(name);
                if (!fn) lex_.fail("unknown function '" + name + "'");
                lex_.take();
                Expr arg = parse_sum();
                expect(')');
                return call_node(*fn, arg);
            }
            if (vars_.index_of(name) >= 0) return symbol(name);
            for (const auto& x : extra_)
                if (x == name) return symbol(name);
            lex_.fail("unknown variable '" + name + "' (declared: " + vars_.first + ", " +
                      vars_.second + ")");
        }
        if (at_op('(')) {
            lex_.take();
            Expr e = parse_sum();
            expect(')');
            return e;
        }
        lex_.fail("expected a value");
        return nullptr;  // unreachable
    }

    void expect(char c) {
        if (!at_op(c)) lex_.fail(std::string("expected '") + c + "'");
        lex_.take();
    }

    Lexer lex_;
    const VarPair& vars_;
    const std::vector<std::string>& extra_;
};

}  // namespace

Expr parse_expr(const std::string& text, const VarPair& vars,
                const std::vector<std::string>& extra) {
    return Parser(text, vars, extra).run();
}

}  // namespace characteristica
