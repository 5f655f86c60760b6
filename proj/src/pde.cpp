#include "characteristica/pde.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

namespace characteristica {

namespace {

// ---- PDE text -> coefficients ----

struct TokenSet {
    // order: u_11, u_12, u_21, u_22, u_1, u_2, u
    std::vector<std::string> names;
};

[[nodiscard]] TokenSet derivative_tokens(const VarPair& vars) {
    const std::string& p = vars.first;
    const std::string& q = vars.second;
    return {{"u_" + p + p, "u_" + p + q, "u_" + q + p, "u_" + q + q, "u_" + p, "u_" + q, "u"}};
}

[[nodiscard]] Expr set_tokens(const Expr& e, const TokenSet& toks, std::size_t one_index) {
    Expr r = e;
    for (std::size_t i = 0; i < toks.names.size(); ++i)
        r = substitute(r, toks.names[i], number(i == one_index ? 1 : 0));
    return r;
}

}  // namespace

Pde2 parse_pde(const std::string& text, const VarPair& vars) {
    auto eq = text.find('=');
    if (eq == std::string::npos)
        throw ParseError("equation needs an '=' separating the two sides");
    if (text.find('=', eq + 1) != std::string::npos)
        throw ParseError("equation has more than one '='");

    TokenSet toks = derivative_tokens(vars);
    Expr lhs = parse_expr(text.substr(0, eq), vars, toks.names);
    Expr rhs = parse_expr(text.substr(eq + 1), vars, toks.names);
    Expr total = sub(lhs, rhs);

    // Coefficients by exact differentiation: when u enters linearly, every
    // d total / d token is the token-free coefficient itself; any token
    // surviving inside a derivative marks a nonlinear entry.
    const std::size_t n = toks.names.size();
    std::vector<Expr> coeff(n);
    for (std::size_t i = 0; i < n; ++i) {
        coeff[i] = simplify(diff(total, toks.names[i]));
        for (std::size_t j = 0; j < n; ++j)
            if (contains_symbol(coeff[i], toks.names[j]))
                throw ParseError("the unknown u and its derivatives must enter linearly");
    }
    Expr free_part = simplify(set_tokens(total, toks, n));  // all tokens -> 0

    Pde2 p;
    p.vars = vars;
    p.a = coeff[0];
    p.b = simplify(mul(number(Rational(1, 2)), add(coeff[1], coeff[2])));
    p.c = coeff[3];
    p.d = coeff[4];
    p.e = coeff[5];
    p.g = coeff[6];
    p.f = simplify(neg(free_part));
    p.text = text;

    if (is_zero_literal(p.a) && is_zero_literal(p.b) && is_zero_literal(p.c))
        throw ParseError("no second-order term: at least one of u_" + vars.first + vars.first +
                         ", u_" + vars.first + vars.second + ", u_" + vars.second + vars.second +
                         " is required");
    return p;
}

Expr principal_apply(const Pde2& p, const Expr& w) {
    Expr w1 = diff(w, p.vars.first), w2 = diff(w, p.vars.second);
    Expr out = add(mul(p.a, diff(w1, p.vars.first)),
                   add(mul(mul(number(2), p.b), diff(w1, p.vars.second)),
                       mul(p.c, diff(w2, p.vars.second))));
    return simplify(out);
}

Expr op_apply_full(const Pde2& p, const Expr& w) {
    Expr lower = add(mul(p.d, diff(w, p.vars.first)), mul(p.e, diff(w, p.vars.second)));
    return simplify(add(principal_apply(p, w), lower));
}

Expr char_form(const Pde2& p, const Expr& w) {
    Expr w1 = diff(w, p.vars.first), w2 = diff(w, p.vars.second);
    return simplify(add(mul(p.a, mul(w1, w1)),
                        add(mul(mul(number(2), p.b), mul(w1, w2)), mul(p.c, mul(w2, w2)))));
}

Expr discriminant(const Pde2& p) { return simplify(sub(mul(p.b, p.b), mul(p.a, p.c))); }

const char* pde_class_name(PdeClass k) {
    switch (k) {
        case PdeClass::Hyperbolic: return "hyperbolic";
        case PdeClass::Parabolic: return "parabolic";
        case PdeClass::Elliptic: return "elliptic";
        case PdeClass::Mixed: return "mixed";
    }
    return "?";
}

Classification classify(const Pde2& p, const SampleRegion& region, const OracleConfig& cfg) {
    Classification cls;
    cls.delta = discriminant(p);

    std::vector<Expr> terms = top_terms(cls.delta);
    std::vector<SamplePoint> pts = draw_samples(p.vars, region, cfg, collect_guards(cls.delta));

    bool first = true;
    for (const SamplePoint& pt : pts) {
        auto v = eval_checked(cls.delta, p.vars, pt.a, pt.b);
        if (!v) throw EngineError("discriminant evaluation fault at an accepted sample");
        double scale = 0.0;
        for (const Expr& t : terms) {
            auto tv = eval_checked(t, p.vars, pt.a, pt.b);
            if (tv) scale = std::max(scale, std::fabs(*tv));
        }
        double thr = cfg.tol_abs + cfg.tol_rel * scale;
        if (*v > thr) {
            if (cls.positive == 0) cls.witness_positive = pt;
            ++cls.positive;
        } else if (*v < -thr) {
            if (cls.negative == 0) cls.witness_negative = pt;
            ++cls.negative;
        } else {
            ++cls.near_zero;
        }
        cls.min_value = first ? *v : std::min(cls.min_value, *v);
        cls.max_value = first ? *v : std::max(cls.max_value, *v);
        first = false;
    }

    const int n = static_cast<int>(pts.size());
    if (cls.positive == n)
        cls.kind = PdeClass::Hyperbolic;
    else if (cls.near_zero == n)
        cls.kind = PdeClass::Parabolic;
    else if (cls.negative == n)
        cls.kind = PdeClass::Elliptic;
    else
        cls.kind = PdeClass::Mixed;
    return cls;
}

// ---- perfect-square extraction for sqrt(delta) ----

namespace {

using Monomial = std::pair<int, int>;  // exponents of (first, second)
using Poly = std::map<Monomial, Rational>;

void poly_add(Poly& p, const Monomial& m, const Rational& v) {
    auto it = p.find(m);
    if (it == p.end()) {
        if (!v.is_zero()) p.emplace(m, v);
        return;
    }
    it->second = it->second + v;
    if (it->second.is_zero()) p.erase(it);
}

[[nodiscard]] Poly poly_mul(const Poly& x, const Poly& y) {
    Poly out;
    for (const auto& [mx, vx] : x)
        for (const auto& [my, vy] : y)
            poly_add(out, {mx.first + my.first, mx.second + my.second}, vx * vy);
    return out;
}

[[nodiscard]] std::optional<Poly> poly_coeffs(const Expr& e, const VarPair& vars) {
    switch (e->kind) {
        case NodeKind::Number: {
            Poly p;
            poly_add(p, {0, 0}, e->value);
            return p;
        }
        case NodeKind::Symbol: {
            Poly p;
            if (e->name == vars.first)
                poly_add(p, {1, 0}, Rational(1));
            else if (e->name == vars.second)
                poly_add(p, {0, 1}, Rational(1));
            else
                return std::nullopt;
            return p;
        }
        case NodeKind::Sum:
        case NodeKind::Difference: {
            auto x = poly_coeffs(e->a, vars), y = poly_coeffs(e->b, vars);
            if (!x || !y) return std::nullopt;
            Rational s = e->kind == NodeKind::Sum ? Rational(1) : Rational(-1);
            for (const auto& [m, v] : *y) poly_add(*x, m, s * v);
            return x;
        }
        case NodeKind::Negate: {
            auto x = poly_coeffs(e->a, vars);
            if (!x) return std::nullopt;
            Poly out;
            for (const auto& [m, v] : *x) out.emplace(m, -v);
            return out;
        }
        case NodeKind::Product: {
            auto x = poly_coeffs(e->a, vars), y = poly_coeffs(e->b, vars);
            if (!x || !y) return std::nullopt;
            return poly_mul(*x, *y);
        }
        case NodeKind::Quotient: {
            auto x = poly_coeffs(e->a, vars);
            auto den = rational_constant(simplify(e->b));
            if (!x || !den || den->is_zero()) return std::nullopt;
            Poly out;
            for (const auto& [m, v] : *x) out.emplace(m, v / *den);
            return out;
        }
        case NodeKind::Power: {
            if (!e->exponent.is_integer() || e->exponent.negative()) return std::nullopt;
            auto base = poly_coeffs(e->a, vars);
            if (!base) return std::nullopt;
            Poly acc;
            poly_add(acc, {0, 0}, Rational(1));
            for (std::int64_t i = 0; i < e->exponent.num(); ++i) acc = poly_mul(acc, *base);
            return acc;
        }
        case NodeKind::Call: return std::nullopt;
    }
    return std::nullopt;
}

// Exact square root of a bivariate polynomial by the leading-term division
// scheme; empty when the input is not a perfect square over the rationals.
[[nodiscard]] std::optional<Poly> poly_sqrt(const Poly& p) {
    if (p.empty()) return Poly{};
    const auto& [lm, lv] = *p.rbegin();  // lex-leading term
    if (lm.first % 2 != 0 || lm.second % 2 != 0) return std::nullopt;
    Rational lroot;
    if (!lv.sqrt_exact(lroot)) return std::nullopt;
    Monomial rm{lm.first / 2, lm.second / 2};
    Poly root;
    root.emplace(rm, lroot);

    for (int guard = 0; guard < 256; ++guard) {
        Poly rem = p;
        Poly sq = poly_mul(root, root);
        for (const auto& [m, v] : sq) poly_add(rem, m, -v);
        if (rem.empty()) return root;
        const auto& [tm, tv] = *rem.rbegin();
        // next term = LT(rem) / (2 * LT(root))
        Monomial nm{tm.first - rm.first, tm.second - rm.second};
        if (nm.first < 0 || nm.second < 0) return std::nullopt;
        if (root.count(nm)) return std::nullopt;  // no progress; not a square
        root.emplace(nm, tv / (Rational(2) * lroot));
    }
    return std::nullopt;
}

[[nodiscard]] Expr poly_to_expr(const Poly& p, const VarPair& vars) {
    Expr out = number(0);
    for (const auto& [m, v] : p) {
        Expr t = number(v);
        if (m.first != 0) t = mul(t, powr(symbol(vars.first), Rational(m.first)));
        if (m.second != 0) t = mul(t, powr(symbol(vars.second), Rational(m.second)));
        out = add(out, t);
    }
    return simplify(out);
}

// Single product term whose factors all carry even integer exponents and
// whose rational coefficient is a perfect square, e.g. 16 e^{2y} sinh^4(x).
[[nodiscard]] std::optional<Expr> even_power_root(const Expr& s) {
    std::vector<Expr> terms = top_terms(s);
    if (terms.size() != 1) return std::nullopt;
    TermView tv = term_view(terms[0]);
    Rational croot;
    if (!tv.coeff.sqrt_exact(croot)) return std::nullopt;
    Expr out = number(croot);
    for (const auto& f : tv.factors) {
        Rational half = f.exp * Rational(1, 2);
        if (!half.is_integer()) return std::nullopt;
        out = mul(out, powr(f.base, half));
    }
    return simplify(out);
}

// min/max of the candidate root over guarded samples, for the sign decision.
struct SignScan {
    double lo = 0, hi = 0;
    bool ok = false;
};

[[nodiscard]] SignScan scan_sign(const Expr& r, const VarPair& vars, const SampleRegion& region,
                                 const OracleConfig& cfg) {
    SignScan s;
    std::vector<SamplePoint> pts;
    try {
        pts = draw_samples(vars, region, cfg, collect_guards(r));
    } catch (const EngineError&) {
        return s;
    }
    bool first = true;
    for (const SamplePoint& pt : pts) {
        auto v = eval_checked(r, vars, pt.a, pt.b);
        if (!v) return s;
        s.lo = first ? *v : std::min(s.lo, *v);
        s.hi = first ? *v : std::max(s.hi, *v);
        first = false;
    }
    s.ok = !first;
    return s;
}

}  // namespace

RootSplit radical_root(const Expr& delta, const VarPair& vars, const SampleRegion& region,
                       const OracleConfig& cfg) {
    Expr s = simplify(delta);
    if (is_zero_literal(s)) return {number(0), true};

    std::optional<Expr> candidate;
    if (auto poly = poly_coeffs(s, vars)) {
        if (auto root = poly_sqrt(*poly)) candidate = poly_to_expr(*root, vars);
    }
    if (!candidate) candidate = even_power_root(s);

    if (candidate) {
        // The algebra says candidate^2 == delta; certify it anyway, then pin
        // the sign so the root matches the nonnegative numeric sqrt.
        Expr gap = simplify(sub(mul(*candidate, *candidate), s));
        bool square_ok = false;
        try {
            square_ok = equiv_zero(gap, vars, region, cfg);
        } catch (const EngineError&) {
        }
        if (square_ok) {
            SignScan sc = scan_sign(*candidate, vars, region, cfg);
            if (sc.ok && sc.lo >= 0.0) return {*candidate, true};
            if (sc.ok && sc.hi <= 0.0) return {simplify(neg(*candidate)), true};
            // sign changes inside the region: fall through to the sqrt node
        }
    }
    return {call(Builtin::Sqrt, s), false};
}

LambdaPair lambdas(const Pde2& p, PdeClass kind, const SampleRegion& region,
                   const OracleConfig& cfg) {
    if (kind == PdeClass::Elliptic || kind == PdeClass::Mixed)
        throw EngineError(std::string("no real characteristic factorization for a ") +
                          pde_class_name(kind) + " problem");

    LambdaPair lp;
    if (is_zero_literal(simplify(p.a))) {
        lp.degenerate = true;
        lp.root = {number(0), true};
        Expr b2 = simplify(mul(number(2), p.b));
        if (is_zero_literal(b2)) {
            if (is_zero_literal(simplify(p.c)))
                throw EngineError("all second-order coefficients vanish");
            return lp;  // only c u_22 survives: both factors are D2
        }
        lp.plus = simplify(neg(div(p.c, b2)));
        return lp;
    }

    if (kind == PdeClass::Parabolic) {
        Expr lam = simplify(neg(div(p.b, p.a)));
        lp.plus = lam;
        lp.minus = lam;
        lp.root = {number(0), true};
        return lp;
    }

    lp.root = radical_root(discriminant(p), p.vars, region, cfg);
    lp.plus = simplify(div(sub(lp.root.root, p.b), p.a));
    lp.minus = simplify(div(sub(neg(lp.root.root), p.b), p.a));
    return lp;
}

}  // namespace characteristica
