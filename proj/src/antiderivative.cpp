#include "characteristica/antiderivative.hpp"

#include <cmath>

namespace characteristica {

namespace {

// u is linear in v when du/dv no longer mentions v; returns the (v-free)
// slope.
[[nodiscard]] std::optional<Expr> linear_slope(const Expr& u, const std::string& v) {
    Expr s = simplify(diff(u, v));
    if (is_zero_literal(s) || contains_symbol(s, v)) return std::nullopt;
    return s;
}

struct ExpLinear {
    Expr arg;    // full exponent argument
    Expr slope;  // d arg / d v
};

[[nodiscard]] std::optional<ExpLinear> as_exp_linear(const Expr& base, const std::string& v) {
    if (base->kind != NodeKind::Call || base->fn != Builtin::Exp) return std::nullopt;
    auto s = linear_slope(base->a, v);
    if (!s) return std::nullopt;
    return ExpLinear{base->a, *s};
}

// Matches p*exp(w) + q with w linear in v and p, q free of v; q must be
// present (otherwise the plain exponential rules apply).
struct ExpAffine {
    Expr p, q, w, slope;
};

[[nodiscard]] std::optional<ExpAffine> as_exp_affine(const Expr& den, const std::string& v) {
    Expr s = simplify(den);
    std::optional<Expr> p, w, slope;
    Expr q;
    for (const Expr& t : top_terms(s)) {
        if (!contains_symbol(t, v)) {
            q = q ? sum_node(q, t) : t;
            continue;
        }
        TermView tv = term_view(t);
        Expr coeff = number(tv.coeff);
        std::optional<ExpLinear> el;
        for (const auto& f : tv.factors) {
            if (!contains_symbol(f.base, v)) {
                Expr piece = f.exp.is_one() ? f.base : power_node(f.base, f.exp);
                coeff = mul(coeff, piece);
                continue;
            }
            if (el || !f.exp.is_one()) return std::nullopt;
            el = as_exp_linear(f.base, v);
            if (!el) return std::nullopt;
        }
        if (!el || p) return std::nullopt;  // exactly one exponential term
        p = coeff;
        w = el->arg;
        slope = el->slope;
    }
    if (!p || !q) return std::nullopt;
    return ExpAffine{*p, q, *w, *slope};
}

[[nodiscard]] Expr rebuild_factor(const FactorView& f) {
    return f.exp.is_one() ? f.base : power_node(f.base, f.exp);
}

// Antiderivative of the v-dependent part of one term, or empty on a catalog
// miss. `dep` holds the v-dependent factors.
[[nodiscard]] std::optional<Expr> integrate_dependent(const std::vector<FactorView>& dep,
                                                      const std::string& v) {
    const Expr var = symbol(v);

    if (dep.empty()) return var;

    if (dep.size() == 1) {
        const auto& [base, exp] = dep[0];

        // v^n and (a*v + b)^n, including n = -1.
        if (auto slope = linear_slope(base, v)) {
            if (exp == Rational(-1))
                return div(call(Builtin::Ln, base), *slope);
            Rational n1 = exp + Rational(1);
            return div(powr(base, n1), mul(number(n1), *slope));
        }

        // exp(u)^k = exp(k*u) with u linear.
        if (auto el = as_exp_linear(base, v)) {
            Expr arg = exp.is_one() ? el->arg : simplify(mul(number(exp), el->arg));
            Expr slope = exp.is_one() ? el->slope : simplify(mul(number(exp), el->slope));
            return div(call(Builtin::Exp, arg), slope);
        }

        // Trigonometric / hyperbolic primitives with linear argument.
        if (base->kind == NodeKind::Call && exp.is_one()) {
            if (auto slope = linear_slope(base->a, v)) {
                switch (base->fn) {
                    case Builtin::Sin: return div(neg(call(Builtin::Cos, base->a)), *slope);
                    case Builtin::Cos: return div(call(Builtin::Sin, base->a), *slope);
                    case Builtin::Sinh: return div(call(Builtin::Cosh, base->a), *slope);
                    case Builtin::Cosh: return div(call(Builtin::Sinh, base->a), *slope);
                    default: break;
                }
            }
        }

        // 1 / (p*exp(w) + q)  ->  v/q - ln(p*exp(w) + q) / (slope*q).
        if (exp == Rational(-1)) {
            if (auto ea = as_exp_affine(base, v)) {
                Expr lnD = call(Builtin::Ln, base);
                return sub(div(var, ea->q), div(lnD, mul(ea->slope, ea->q)));
            }
        }
        return std::nullopt;
    }

    if (dep.size() == 2) {
        // exp(u) / (p*exp(w) + q) with matching slopes:
        //   exp(u - w) * ln(p*exp(w) + q) / (slope * p).
        for (int i = 0; i < 2; ++i) {
            const auto& num = dep[static_cast<std::size_t>(i)];
            const auto& den = dep[static_cast<std::size_t>(1 - i)];
            if (!num.exp.is_one() || den.exp != Rational(-1)) continue;
            auto el = as_exp_linear(num.base, v);
            if (!el) continue;
            auto ea = as_exp_affine(den.base, v);
            if (!ea) continue;
            Expr slope_gap = simplify(sub(el->slope, ea->slope));
            if (!is_zero_literal(slope_gap)) continue;
            Expr shift = simplify(sub(el->arg, ea->w));  // v-free when slopes match
            if (contains_symbol(shift, v)) continue;
            Expr lnD = call(Builtin::Ln, den.base);
            Expr res = div(lnD, mul(ea->slope, ea->p));
            if (!is_zero_literal(shift)) res = mul(call(Builtin::Exp, shift), res);
            return res;
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<Expr> antiderivative(const Expr& e, const std::string& var, const VarPair& vars,
                                   const std::optional<SampleRegion>& region,
                                   const OracleConfig& cfg) {
    Expr s = simplify(e);
    Expr total;
    for (const Expr& term : top_terms(s)) {
        TermView tv = term_view(term);
        Expr coeff = number(tv.coeff);
        std::vector<FactorView> dep;
        for (const auto& f : tv.factors) {
            if (contains_symbol(f.base, var))
                dep.push_back(f);
            else
                coeff = mul(coeff, rebuild_factor(f));
        }
        auto part = integrate_dependent(dep, var);
        if (!part) return std::nullopt;
        Expr piece = mul(coeff, *part);
        total = total ? add(total, piece) : piece;
    }
    if (!total) total = number(0);

    // Self-certification: differentiate the candidate and compare with the
    // input on a guarded region. A failed certificate is a miss, not an
    // answer.
    SampleRegion reg = region.value_or(SampleRegion{Rational(1, 2), Rational(2), Rational(1, 2),
                                                    Rational(2), {}});
    Expr gap = simplify(sub(diff(total, var), e));
    try {
        if (!equiv_zero(gap, vars, reg, cfg)) return std::nullopt;
    } catch (const EngineError&) {
        return std::nullopt;
    }
    return simplify(total);
}

}  // namespace characteristica
