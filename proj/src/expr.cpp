#include "characteristica/expr.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace characteristica {

namespace {

[[nodiscard]] Expr make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

[[nodiscard]] bool is_number(const Expr& e) { return e->kind == NodeKind::Number; }

[[nodiscard]] bool is_number_eq(const Expr& e, std::int64_t v) {
    return e->kind == NodeKind::Number && e->value == Rational(v);
}

}  // namespace

const char* builtin_name(Builtin f) {
    switch (f) {
        case Builtin::Exp: return "exp";
        case Builtin::Ln: return "ln";
        case Builtin::Sqrt: return "sqrt";
        case Builtin::Sinh: return "sinh";
        case Builtin::Cosh: return "cosh";
        case Builtin::Tanh: return "tanh";
        case Builtin::Sin: return "sin";
        case Builtin::Cos: return "cos";
    }
    return "?";
}

std::optional<Builtin> builtin_from_name(const std::string& name) {
    if (name == "exp") return Builtin::Exp;
    if (name == "ln") return Builtin::Ln;
    if (name == "sqrt") return Builtin::Sqrt;
    if (name == "sinh") return Builtin::Sinh;
    if (name == "cosh") return Builtin::Cosh;
    if (name == "tanh") return Builtin::Tanh;
    if (name == "sin") return Builtin::Sin;
    if (name == "cos") return Builtin::Cos;
    return std::nullopt;
}

// ---- raw constructors ----

Expr number(Rational v) { return make_node({.kind = NodeKind::Number, .value = v}); }
Expr number(std::int64_t v) { return number(Rational(v)); }
Expr symbol(std::string name) {
    return make_node({.kind = NodeKind::Symbol, .name = std::move(name)});
}
Expr sum_node(Expr a, Expr b) {
    return make_node({.kind = NodeKind::Sum, .a = std::move(a), .b = std::move(b)});
}
Expr difference_node(Expr a, Expr b) {
    return make_node({.kind = NodeKind::Difference, .a = std::move(a), .b = std::move(b)});
}
Expr product_node(Expr a, Expr b) {
    return make_node({.kind = NodeKind::Product, .a = std::move(a), .b = std::move(b)});
}
Expr quotient_node(Expr a, Expr b) {
    return make_node({.kind = NodeKind::Quotient, .a = std::move(a), .b = std::move(b)});
}
Expr negate_node(Expr a) {
    return make_node({.kind = NodeKind::Negate, .a = std::move(a)});
}
Expr power_node(Expr base, Rational exponent) {
    return make_node({.kind = NodeKind::Power, .exponent = exponent, .a = std::move(base)});
}
Expr call_node(Builtin f, Expr arg) {
    return make_node({.kind = NodeKind::Call, .fn = f, .a = std::move(arg)});
}

// ---- smart builders ----

Expr add(Expr a, Expr b) {
    if (is_number_eq(a, 0)) return b;
    if (is_number_eq(b, 0)) return a;
    if (is_number(a) && is_number(b)) return number(a->value + b->value);
    return sum_node(std::move(a), std::move(b));
}

Expr sub(Expr a, Expr b) {
    if (is_number_eq(b, 0)) return a;
    if (is_number(a) && is_number(b)) return number(a->value - b->value);
    if (is_number_eq(a, 0)) return neg(std::move(b));
    if (structural_equal(a, b)) return number(0);
    return difference_node(std::move(a), std::move(b));
}

Expr mul(Expr a, Expr b) {
    if (is_number_eq(a, 0) || is_number_eq(b, 0)) return number(0);
    if (is_number_eq(a, 1)) return b;
    if (is_number_eq(b, 1)) return a;
    if (is_number(a) && is_number(b)) return number(a->value * b->value);
    if (is_number_eq(a, -1)) return neg(std::move(b));
    if (is_number_eq(b, -1)) return neg(std::move(a));
    return product_node(std::move(a), std::move(b));
}

Expr div(Expr a, Expr b) {
    if (is_number_eq(b, 1)) return a;
    if (is_number(a) && is_number(b) && !b->value.is_zero())
        return number(a->value / b->value);
    if (is_number_eq(a, 0)) return number(0);
    return quotient_node(std::move(a), std::move(b));
}

Expr neg(Expr a) {
    if (is_number(a)) return number(-a->value);
    if (a->kind == NodeKind::Negate) return a->a;
    return negate_node(std::move(a));
}

namespace {

// Merging (base^s)^r -> base^(s*r) flips sign for negative base when s is an
// even integer and r is not an integer ((b^2)^(1/2) = |b|), so that case is
// the one combination left alone.
[[nodiscard]] bool exponent_merge_ok(const Rational& inner, const Rational& outer) {
    if (outer.is_integer()) return true;
    return !(inner.is_integer() && inner.num() % 2 == 0);
}

}  // namespace

Expr powr(Expr base, Rational exponent) {
    if (exponent.is_zero()) return number(1);
    if (exponent.is_one()) return base;
    if (is_number_eq(base, 1)) return number(1);
    if (is_number(base) && exponent.is_integer() && !(base->value.is_zero() && exponent.negative()))
        return number(base->value.pow_int(exponent.num()));
    if (base->kind == NodeKind::Power && exponent_merge_ok(base->exponent, exponent))
        return powr(base->a, base->exponent * exponent);
    return power_node(std::move(base), exponent);
}

Expr call(Builtin f, Expr arg) {
    if (is_number(arg)) {
        const Rational& v = arg->value;
        if (v.is_zero()) {
            switch (f) {
                case Builtin::Exp: case Builtin::Cosh: case Builtin::Cos: return number(1);
                case Builtin::Sinh: case Builtin::Tanh: case Builtin::Sin: return number(0);
                default: break;
            }
        }
        if (v.is_one() && f == Builtin::Ln) return number(0);
        if (f == Builtin::Sqrt) {
            Rational r;
            if (!v.negative() && v.sqrt_exact(r)) return number(r);
        }
    }
    return call_node(f, std::move(arg));
}

// ---- queries ----

bool structural_equal(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case NodeKind::Number: return a->value == b->value;
        case NodeKind::Symbol: return a->name == b->name;
        case NodeKind::Negate: return structural_equal(a->a, b->a);
        case NodeKind::Power:
            return a->exponent == b->exponent && structural_equal(a->a, b->a);
        case NodeKind::Call:
            return a->fn == b->fn && structural_equal(a->a, b->a);
        default:
            return structural_equal(a->a, b->a) && structural_equal(a->b, b->b);
    }
}

bool contains_symbol(const Expr& e, const std::string& name) {
    switch (e->kind) {
        case NodeKind::Number: return false;
        case NodeKind::Symbol: return e->name == name;
        case NodeKind::Negate:
        case NodeKind::Power:
        case NodeKind::Call: return contains_symbol(e->a, name);
        default:
            return contains_symbol(e->a, name) || contains_symbol(e->b, name);
    }
}

std::optional<Rational> rational_constant(const Expr& e) {
    switch (e->kind) {
        case NodeKind::Number: return e->value;
        case NodeKind::Negate: {
            auto v = rational_constant(e->a);
            if (v) return -*v;
            return std::nullopt;
        }
        case NodeKind::Sum:
        case NodeKind::Difference:
        case NodeKind::Product:
        case NodeKind::Quotient: {
            auto va = rational_constant(e->a);
            auto vb = rational_constant(e->b);
            if (!va || !vb) return std::nullopt;
            switch (e->kind) {
                case NodeKind::Sum: return *va + *vb;
                case NodeKind::Difference: return *va - *vb;
                case NodeKind::Product: return *va * *vb;
                default:
                    if (vb->is_zero()) return std::nullopt;
                    return *va / *vb;
            }
        }
        case NodeKind::Power: {
            auto v = rational_constant(e->a);
            if (v && e->exponent.is_integer() && !(v->is_zero() && e->exponent.negative()))
                return v->pow_int(e->exponent.num());
            return std::nullopt;
        }
        default: return std::nullopt;
    }
}

bool is_zero_literal(const Expr& e) { return is_number_eq(e, 0); }

namespace {

void collect_terms(const Expr& e, bool negated, std::vector<Expr>& out) {
    switch (e->kind) {
        case NodeKind::Sum:
            collect_terms(e->a, negated, out);
            collect_terms(e->b, negated, out);
            return;
        case NodeKind::Difference:
            collect_terms(e->a, negated, out);
            collect_terms(e->b, !negated, out);
            return;
        case NodeKind::Negate:
            collect_terms(e->a, !negated, out);
            return;
        default:
            out.push_back(negated ? neg(e) : e);
    }
}

}  // namespace

std::vector<Expr> top_terms(const Expr& e) {
    std::vector<Expr> out;
    collect_terms(e, false, out);
    return out;
}

namespace {

void term_view_walk(TermView& tv, const Expr& e, const Rational& exp) {
    if (exp.is_zero()) return;
    switch (e->kind) {
        case NodeKind::Number:
            if (!(e->value.is_zero() && exp.negative())) {
                if (exp.is_integer()) {
                    tv.coeff *= e->value.pow_int(exp.num());
                    return;
                }
            }
            break;
        case NodeKind::Product:
            term_view_walk(tv, e->a, exp);
            term_view_walk(tv, e->b, exp);
            return;
        case NodeKind::Quotient:
            term_view_walk(tv, e->a, exp);
            term_view_walk(tv, e->b, -exp);
            return;
        case NodeKind::Negate:
            if (exp.is_integer()) {
                if (exp.num() % 2 != 0) tv.coeff = -tv.coeff;
                term_view_walk(tv, e->a, exp);
                return;
            }
            break;
        case NodeKind::Power:
            if (exponent_merge_ok(e->exponent, exp)) {
                term_view_walk(tv, e->a, e->exponent * exp);
                return;
            }
            break;
        case NodeKind::Call:
            if (e->fn == Builtin::Sqrt) {
                term_view_walk(tv, e->a, exp * Rational(1, 2));
                return;
            }
            break;
        default: break;
    }
    tv.factors.push_back({e, exp});
}

}  // namespace

TermView term_view(const Expr& term) {
    TermView tv;
    term_view_walk(tv, term, Rational(1));
    return tv;
}

// ---- evaluation ----

std::optional<double> eval_checked(const Expr& e, const VarPair& vars, double v1, double v2) {
    auto finite = [](double v) -> std::optional<double> {
        if (!std::isfinite(v)) return std::nullopt;
        return v;
    };
    switch (e->kind) {
        case NodeKind::Number:
            return e->value.value();
        case NodeKind::Symbol: {
            int i = vars.index_of(e->name);
            if (i < 0) return std::nullopt;
            return i == 0 ? v1 : v2;
        }
        case NodeKind::Sum: {
            auto a = eval_checked(e->a, vars, v1, v2), b = eval_checked(e->b, vars, v1, v2);
            if (!a || !b) return std::nullopt;
            return finite(*a + *b);
        }
        case NodeKind::Difference: {
            auto a = eval_checked(e->a, vars, v1, v2), b = eval_checked(e->b, vars, v1, v2);
            if (!a || !b) return std::nullopt;
            return finite(*a - *b);
        }
        case NodeKind::Product: {
            auto a = eval_checked(e->a, vars, v1, v2), b = eval_checked(e->b, vars, v1, v2);
            if (!a || !b) return std::nullopt;
            return finite(*a * *b);
        }
        case NodeKind::Quotient: {
            auto a = eval_checked(e->a, vars, v1, v2), b = eval_checked(e->b, vars, v1, v2);
            if (!a || !b || *b == 0.0) return std::nullopt;
            return finite(*a / *b);
        }
        case NodeKind::Negate: {
            auto a = eval_checked(e->a, vars, v1, v2);
            if (!a) return std::nullopt;
            return -*a;
        }
        case NodeKind::Power: {
            auto a = eval_checked(e->a, vars, v1, v2);
            if (!a) return std::nullopt;
            const Rational& r = e->exponent;
            if (r.is_integer())
                return (*a == 0.0 && r.negative()) ? std::nullopt
                                                   : finite(std::pow(*a, static_cast<double>(r.num())));
            if (*a < 0.0) return std::nullopt;  // principal real root only
            if (*a == 0.0) return r.negative() ? std::nullopt : std::optional<double>(0.0);
            return finite(std::pow(*a, r.value()));
        }
        case NodeKind::Call: {
            auto a = eval_checked(e->a, vars, v1, v2);
            if (!a) return std::nullopt;
            switch (e->fn) {
                case Builtin::Exp: return finite(std::exp(*a));
                case Builtin::Ln: return *a > 0.0 ? finite(std::log(*a)) : std::nullopt;
                case Builtin::Sqrt: return *a >= 0.0 ? finite(std::sqrt(*a)) : std::nullopt;
                case Builtin::Sinh: return finite(std::sinh(*a));
                case Builtin::Cosh: return finite(std::cosh(*a));
                case Builtin::Tanh: return finite(std::tanh(*a));
                case Builtin::Sin: return finite(std::sin(*a));
                case Builtin::Cos: return finite(std::cos(*a));
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

// ---- printing ----

namespace {

[[nodiscard]] std::string rational_text(const Rational& v) {
    if (v.is_integer()) {
        if (!v.negative()) return std::to_string(v.num());
        return "(" + std::to_string(v.num()) + ")";
    }
    return "(" + std::to_string(v.num()) + "/" + std::to_string(v.den()) + ")";
}

void canon(const Expr& e, std::string& out) {
    switch (e->kind) {
        case NodeKind::Number: {
            const Rational& v = e->value;
            if (v.is_integer()) {
                out += std::to_string(v.num());
            } else {
                out += "(";
                out += std::to_string(v.num());
                out += "/";
                out += std::to_string(v.den());
                out += ")";
            }
            return;
        }
        case NodeKind::Symbol: out += e->name; return;
        case NodeKind::Sum:
            out += "(";
            canon(e->a, out);
            out += " + ";
            canon(e->b, out);
            out += ")";
            return;
        case NodeKind::Difference:
            out += "(";
            canon(e->a, out);
            out += " - ";
            canon(e->b, out);
            out += ")";
            return;
        case NodeKind::Product:
            out += "(";
            canon(e->a, out);
            out += "*";
            canon(e->b, out);
            out += ")";
            return;
        case NodeKind::Quotient:
            out += "(";
            canon(e->a, out);
            out += "/";
            canon(e->b, out);
            out += ")";
            return;
        case NodeKind::Negate:
            out += "(-";
            canon(e->a, out);
            out += ")";
            return;
        case NodeKind::Power:
            out += "(";
            canon(e->a, out);
            out += ")^";
            out += rational_text(e->exponent);
            return;
        case NodeKind::Call:
            out += builtin_name(e->fn);
            out += "(";
            canon(e->a, out);
            out += ")";
            return;
    }
}

// Precedence: 1 sum/difference, 2 product/quotient, 3 negation head, 4 power, 5 atom.
[[nodiscard]] int pretty_level(const Expr& e) {
    switch (e->kind) {
        case NodeKind::Sum:
        case NodeKind::Difference: return 1;
        case NodeKind::Product:
        case NodeKind::Quotient: return 2;
        case NodeKind::Negate: return 1;
        case NodeKind::Power: return 4;
        case NodeKind::Number: return e->value.negative() || !e->value.is_integer() ? 2 : 5;
        default: return 5;
    }
}

void pretty(const Expr& e, std::string& out);

void pretty_wrap(const Expr& e, int need, std::string& out) {
    if (pretty_level(e) < need) {
        out += "(";
        pretty(e, out);
        out += ")";
    } else {
        pretty(e, out);
    }
}

void pretty(const Expr& e, std::string& out) {
    switch (e->kind) {
        case NodeKind::Number: out += e->value.str(); return;
        case NodeKind::Symbol: out += e->name; return;
        case NodeKind::Sum:
            pretty_wrap(e->a, 1, out);
            out += " + ";
            pretty_wrap(e->b, 2, out);
            return;
        case NodeKind::Difference:
            pretty_wrap(e->a, 1, out);
            out += " - ";
            pretty_wrap(e->b, 2, out);
            return;
        case NodeKind::Product:
            pretty_wrap(e->a, 2, out);
            out += "*";
            pretty_wrap(e->b, 3, out);
            return;
        case NodeKind::Quotient:
            pretty_wrap(e->a, 2, out);
            out += "/";
            pretty_wrap(e->b, 3, out);
            return;
        case NodeKind::Negate:
            out += "-";
            pretty_wrap(e->a, 2, out);
            return;
        case NodeKind::Power:
            pretty_wrap(e->a, 5, out);
            out += "^";
            if (e->exponent.is_integer() && !e->exponent.negative())
                out += std::to_string(e->exponent.num());
            else
                out += "(" + e->exponent.str() + ")";
            return;
        case NodeKind::Call:
            out += builtin_name(e->fn);
            out += "(";
            pretty(e->a, out);
            out += ")";
            return;
    }
}

}  // namespace

std::string canonical_text(const Expr& e) {
    std::string out;
    canon(e, out);
    return out;
}

std::string pretty_text(const Expr& e) {
    std::string out;
    pretty(e, out);
    return out;
}

// ---- differentiation ----

Expr diff(const Expr& e, const std::string& var) {
    switch (e->kind) {
        case NodeKind::Number: return number(0);
        case NodeKind::Symbol: return number(e->name == var ? 1 : 0);
        case NodeKind::Sum: return add(diff(e->a, var), diff(e->b, var));
        case NodeKind::Difference: return sub(diff(e->a, var), diff(e->b, var));
        case NodeKind::Product:
            return add(mul(diff(e->a, var), e->b), mul(e->a, diff(e->b, var)));
        case NodeKind::Quotient:
            return div(sub(mul(diff(e->a, var), e->b), mul(e->a, diff(e->b, var))),
                       powr(e->b, Rational(2)));
        case NodeKind::Negate: return neg(diff(e->a, var));
        case NodeKind::Power: {
            // d(b^r) = r * b^(r-1) * b'
            Expr db = diff(e->a, var);
            return mul(mul(number(e->exponent), powr(e->a, e->exponent - Rational(1))), db);
        }
        case NodeKind::Call: {
            Expr da = diff(e->a, var);
            if (is_zero_literal(da)) return number(0);
            switch (e->fn) {
                case Builtin::Exp: return mul(call(Builtin::Exp, e->a), da);
                case Builtin::Ln: return div(da, e->a);
                case Builtin::Sqrt:
                    return div(da, mul(number(2), call(Builtin::Sqrt, e->a)));
                case Builtin::Sinh: return mul(call(Builtin::Cosh, e->a), da);
                case Builtin::Cosh: return mul(call(Builtin::Sinh, e->a), da);
                case Builtin::Tanh:
                    return mul(sub(number(1), powr(call(Builtin::Tanh, e->a), Rational(2))), da);
                case Builtin::Sin: return mul(call(Builtin::Cos, e->a), da);
                case Builtin::Cos: return neg(mul(call(Builtin::Sin, e->a), da));
            }
            return number(0);
        }
    }
    return number(0);
}

// ---- substitution ----

namespace {

Expr substitute_impl(const Expr& e, const std::string& n1, const Expr& r1,
                     const std::string* n2, const Expr* r2) {
    switch (e->kind) {
        case NodeKind::Number: return e;
        case NodeKind::Symbol:
            if (e->name == n1) return r1;
            if (n2 && e->name == *n2) return *r2;
            return e;
        case NodeKind::Negate: return negate_node(substitute_impl(e->a, n1, r1, n2, r2));
        case NodeKind::Power:
            return power_node(substitute_impl(e->a, n1, r1, n2, r2), e->exponent);
        case NodeKind::Call: return call_node(e->fn, substitute_impl(e->a, n1, r1, n2, r2));
        case NodeKind::Sum:
            return sum_node(substitute_impl(e->a, n1, r1, n2, r2),
                            substitute_impl(e->b, n1, r1, n2, r2));
        case NodeKind::Difference:
            return difference_node(substitute_impl(e->a, n1, r1, n2, r2),
                                   substitute_impl(e->b, n1, r1, n2, r2));
        case NodeKind::Product:
            return product_node(substitute_impl(e->a, n1, r1, n2, r2),
                                substitute_impl(e->b, n1, r1, n2, r2));
        case NodeKind::Quotient:
            return quotient_node(substitute_impl(e->a, n1, r1, n2, r2),
                                 substitute_impl(e->b, n1, r1, n2, r2));
    }
    return e;
}

}  // namespace

Expr substitute(const Expr& e, const std::string& name, const Expr& repl) {
    return substitute_impl(e, name, repl, nullptr, nullptr);
}

Expr substitute_pair(const Expr& e, const std::string& n1, const Expr& r1,
                     const std::string& n2, const Expr& r2) {
    return substitute_impl(e, n1, r1, &n2, &r2);
}

// ---- simplification ----

namespace {

struct Factor {
    Expr base;
    Rational exp;
};

// One normalized multiplicative term: rational coefficient times a product of
// atomic factors with rational exponents, keyed by the factor's canonical text.
struct Term {
    Rational coeff{1};
    std::map<std::string, Factor> factors;
    bool dead = false;  // division by a literal zero; kept verbatim

    [[nodiscard]] std::string key() const {
        std::string k;
        for (const auto& [text, f] : factors) {
            k += text;
            k += "^";
            k += f.exp.str();
            k += "|";
        }
        return k;
    }
};

void add_factor(Term& t, const Expr& base, const Rational& exp, int depth);

void mul_walk(Term& t, const Expr& e, int sign, int depth) {
    switch (e->kind) {
        case NodeKind::Product:
            mul_walk(t, e->a, sign, depth);
            mul_walk(t, e->b, sign, depth);
            return;
        case NodeKind::Quotient:
            mul_walk(t, e->a, sign, depth);
            mul_walk(t, e->b, -sign, depth);
            return;
        case NodeKind::Negate:
            t.coeff = -t.coeff;
            mul_walk(t, e->a, sign, depth);
            return;
        default:
            add_factor(t, e, Rational(sign), depth);
    }
}

Expr simplify_depth(const Expr& e, int depth);

void add_factor(Term& t, const Expr& base, const Rational& exp, int depth) {
    if (exp.is_zero() || t.dead) return;
    switch (base->kind) {
        case NodeKind::Number: {
            const Rational& v = base->value;
            if (v.is_zero() && exp.negative()) {
                t.dead = true;  // literal 1/0: preserved, evaluation faults
                Factor f{base, exp};
                t.factors.emplace(canonical_text(base), f);
                return;
            }
            if (exp.is_integer()) {
                t.coeff *= v.pow_int(exp.num());
                return;
            }
            if (exp.den() == 2 && !v.negative()) {
                Rational root;
                if (v.sqrt_exact(root)) {
                    t.coeff *= root.pow_int(exp.num());
                    return;
                }
            }
            break;  // irrational constant power stays atomic
        }
        case NodeKind::Product:
            if (exp.is_integer()) {
                add_factor(t, base->a, exp, depth);
                add_factor(t, base->b, exp, depth);
                return;
            }
            break;
        case NodeKind::Quotient:
            if (exp.is_integer()) {
                add_factor(t, base->a, exp, depth);
                add_factor(t, base->b, -exp, depth);
                return;
            }
            break;
        case NodeKind::Negate:
            if (exp.is_integer()) {
                if (exp.num() % 2 != 0) t.coeff = -t.coeff;
                add_factor(t, base->a, exp, depth);
                return;
            }
            break;
        case NodeKind::Power:
            if (exponent_merge_ok(base->exponent, exp)) {
                add_factor(t, base->a, base->exponent * exp, depth);
                return;
            }
            break;
        case NodeKind::Call:
            if (base->fn == Builtin::Sqrt) {
                add_factor(t, base->a, exp * Rational(1, 2), depth);
                return;
            }
            break;
        default: break;
    }
    // Atomic factor: simplify its interior once, then re-dispatch if that
    // changed the node's class (e.g. (2 + 3) became a number).
    Expr inner = depth > 0 ? simplify_depth(base, depth - 1) : base;
    if (depth > 0 && !structural_equal(inner, base)) {
        add_factor(t, inner, exp, 0);
        return;
    }
    std::string key = canonical_text(inner);
    auto it = t.factors.find(key);
    if (it == t.factors.end()) {
        t.factors.emplace(std::move(key), Factor{inner, exp});
    } else {
        it->second.exp += exp;
        if (it->second.exp.is_zero()) t.factors.erase(it);
    }
}

void sum_walk(const Expr& e, bool negated, std::vector<Term>& out, int depth) {
    switch (e->kind) {
        case NodeKind::Sum:
            sum_walk(e->a, negated, out, depth);
            sum_walk(e->b, negated, out, depth);
            return;
        case NodeKind::Difference:
            sum_walk(e->a, negated, out, depth);
            sum_walk(e->b, !negated, out, depth);
            return;
        case NodeKind::Negate:
            sum_walk(e->a, !negated, out, depth);
            return;
        default: {
            Term t;
            mul_walk(t, e, 1, depth);
            if (negated) t.coeff = -t.coeff;
            // A bare numeric multiple of a sum, like (1/2)*(x - y), re-enters
            // term collection so its pieces can merge with sibling terms.
            // Products of sums with non-constant cofactors stay unexpanded.
            if (!t.dead && t.factors.size() == 1) {
                const Factor& f = t.factors.begin()->second;
                if (f.exp.is_one() &&
                    (f.base->kind == NodeKind::Sum || f.base->kind == NodeKind::Difference)) {
                    std::vector<Term> inner;
                    sum_walk(f.base, false, inner, depth);
                    for (Term& it : inner) {
                        it.coeff *= t.coeff;
                        out.push_back(std::move(it));
                    }
                    return;
                }
            }
            out.push_back(std::move(t));
        }
    }
}

[[nodiscard]] Expr rebuild_term(const Term& t) {
    std::vector<const Factor*> num, den;
    for (const auto& [key, f] : t.factors) {
        (void)key;
        (f.exp.negative() ? den : num).push_back(&f);
    }
    auto build_side = [](const std::vector<const Factor*>& fs, bool invert) -> Expr {
        Expr acc;
        for (const Factor* f : fs) {
            Rational e = invert ? -f->exp : f->exp;
            Expr piece = e.is_one() ? f->base : power_node(f->base, e);
            acc = acc ? product_node(acc, piece) : piece;
        }
        return acc;
    };
    Expr numerator = build_side(num, false);
    Expr denominator = build_side(den, true);
    Rational mag = t.coeff.negative() ? -t.coeff : t.coeff;
    if (!mag.is_one() || !numerator)
        numerator = numerator ? product_node(number(mag), numerator) : number(mag);
    return denominator ? quotient_node(numerator, denominator) : numerator;
}

Expr simplify_depth(const Expr& e, int depth) {
    // Normalize into combined terms; inner structures (call arguments, atomic
    // bases) are simplified as they are keyed.
    switch (e->kind) {
        case NodeKind::Number:
        case NodeKind::Symbol: return e;
        case NodeKind::Call:
            return call(e->fn, simplify_depth(e->a, depth));
        default: break;
    }
    std::vector<Term> raw;
    sum_walk(e, false, raw, depth);

    std::map<std::string, Term> combined;
    for (auto& t : raw) {
        if (t.coeff.is_zero() && !t.dead) continue;
        std::string k = t.key();
        auto it = combined.find(k);
        if (it == combined.end())
            combined.emplace(std::move(k), std::move(t));
        else
            it->second.coeff += t.coeff;
    }

    Expr acc;
    bool first = true;
    for (const auto& [key, t] : combined) {
        (void)key;
        if (t.coeff.is_zero() && !t.dead) continue;
        Expr piece = rebuild_term(t);
        bool negative = t.coeff.negative();
        if (first) {
            // a leading constant keeps its sign inside the literal
            if (negative && piece->kind == NodeKind::Number)
                acc = number(-piece->value);
            else
                acc = negative ? negate_node(piece) : piece;
            first = false;
        } else {
            acc = negative ? difference_node(acc, piece) : sum_node(acc, piece);
        }
    }
    return acc ? acc : number(0);
}

}  // namespace

Expr simplify(const Expr& e) { return simplify_depth(e, 16); }

// ---- domain guards ----

namespace {

void guards_walk(const Expr& e, std::vector<DomainGuard>& out,
                 std::set<std::pair<std::string, bool>>& seen) {
    auto push = [&](const Expr& g, bool positive) {
        if (g->kind == NodeKind::Number) return;  // constant guards carry no sampling constraint
        auto k = std::make_pair(canonical_text(g), positive);
        if (seen.insert(k).second) out.push_back({g, positive});
    };
    switch (e->kind) {
        case NodeKind::Number:
        case NodeKind::Symbol: return;
        case NodeKind::Quotient:
            push(e->b, false);
            guards_walk(e->a, out, seen);
            guards_walk(e->b, out, seen);
            return;
        case NodeKind::Power:
            if (!e->exponent.is_integer())
                push(e->a, true);
            else if (e->exponent.negative())
                push(e->a, false);
            guards_walk(e->a, out, seen);
            return;
        case NodeKind::Call:
            if (e->fn == Builtin::Ln || e->fn == Builtin::Sqrt) push(e->a, true);
            guards_walk(e->a, out, seen);
            return;
        case NodeKind::Negate: guards_walk(e->a, out, seen); return;
        default:
            guards_walk(e->a, out, seen);
            guards_walk(e->b, out, seen);
    }
}

}  // namespace

std::vector<DomainGuard> collect_guards(const Expr& e) {
    std::vector<DomainGuard> out;
    std::set<std::pair<std::string, bool>> seen;
    guards_walk(e, out, seen);
    return out;
}

}  // namespace characteristica
