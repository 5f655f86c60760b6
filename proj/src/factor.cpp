#include "characteristica/factor.hpp"

#include "characteristica/oracle.hpp"

namespace characteristica {

Expr apply_op(const FirstOrderOp& op, const Expr& w, const VarPair& vars) {
    Expr d1 = diff(w, vars.first);
    Expr d2 = diff(w, vars.second);
    return simplify(add(mul(op.alpha, d1), mul(op.beta, d2)));
}

std::pair<Expr, Expr> residue_terms(const FactorPair& pair, const VarPair& vars) {
    // Composing the two operators reproduces the principal part up to
    // first-order leftovers: (minus after plus) misses by L-[alpha+]*D1 +
    // L-[beta+]*D2. The D1 leftover vanishes for every pair built here
    // (alpha is a constant 0 or 1), leaving the D2 residue.
    Expr r_minus = simplify(neg(apply_op(pair.minus, pair.plus.beta, vars)));
    Expr r_plus = simplify(neg(apply_op(pair.plus, pair.minus.beta, vars)));
    return {r_minus, r_plus};
}

FactorPair factor_principal(const Pde2& p, const LambdaPair& lam, PdeClass kind) {
    if (kind != PdeClass::Hyperbolic && kind != PdeClass::Parabolic)
        throw EngineError("only hyperbolic and parabolic principal parts factor over the reals");

    FactorPair pair;
    pair.kind = kind;
    pair.degenerate = lam.degenerate;

    Expr one = number(1);
    Expr zero = number(0);

    if (!lam.degenerate) {
        if (kind == PdeClass::Parabolic) {
            if (!lam.plus) throw EngineError("parabolic slope missing");
            Expr lambda = *lam.plus;
            FirstOrderOp op{one, simplify(neg(lambda)), lambda};
            pair.minus = op;
            pair.plus = op;
        } else {
            if (!lam.plus || !lam.minus) throw EngineError("hyperbolic slopes missing");
            pair.minus = FirstOrderOp{one, simplify(neg(*lam.minus)), *lam.minus};
            pair.plus = FirstOrderOp{one, simplify(neg(*lam.plus)), *lam.plus};
        }
        pair.leading = simplify(p.a);
    } else if (kind == PdeClass::Hyperbolic) {
        // a == 0, b != 0: P = 2b*D1D2 + c*D2^2 = 2b * (D1 + (c/2b) D2) D2
        // up to the usual residue. The D2 factor plays the minus role.
        pair.minus = FirstOrderOp{zero, one, std::nullopt};
        Expr beta_plus = simplify(div(p.c, mul(number(2), p.b)));
        pair.plus = FirstOrderOp{one, beta_plus, lam.plus};
        pair.leading = simplify(mul(number(2), p.b));
    } else {
        // a == 0, b == 0, c != 0: P = c*D2^2, a perfect square of D2.
        FirstOrderOp op{zero, one, std::nullopt};
        pair.minus = op;
        pair.plus = op;
        pair.leading = simplify(p.c);
    }

    auto [rm, rp] = residue_terms(pair, p.vars);
    pair.residue_minus = rm;
    pair.residue_plus = rp;
    return pair;
}

CommutatorReport commutator_report(const Pde2& p, const FactorPair& pair,
                                   const std::optional<std::pair<Expr, Expr>>& invariants,
                                   const SampleRegion& region, const OracleConfig& cfg) {
    CommutatorReport rep;
    rep.r_minus = pair.residue_minus;
    rep.r_plus = pair.residue_plus;
    rep.commutator = simplify(sub(pair.residue_plus, pair.residue_minus));
    rep.commutes = equiv_zero(rep.commutator, p.vars, region, cfg);
    rep.residue_free_minus = equiv_zero(pair.residue_minus, p.vars, region, cfg);
    rep.residue_free_plus = equiv_zero(pair.residue_plus, p.vars, region, cfg);

    if (invariants) {
        const Expr& phi = invariants->first;
        const Expr& psi = invariants->second;
        if (!equiv_zero(apply_op(pair.plus, phi, p.vars), p.vars, region, cfg))
            throw EngineError("phi is not annihilated by the plus operator on this region");

        Expr phi2 = diff(phi, p.vars.second);
        Expr p_phi = principal_apply(p, phi);
        // P applied to an invariant collapses to leading * residue * (d/d2):
        // the operator's own second-order action on its invariant vanishes.
        bool structural_minus = equiv_zero(
            simplify(sub(p_phi, mul(pair.leading, mul(pair.residue_minus, phi2)))),
            p.vars, region, cfg);

        if (pair.kind == PdeClass::Parabolic) {
            rep.map_form_consistent = structural_minus;
        } else {
            if (!equiv_zero(apply_op(pair.minus, psi, p.vars), p.vars, region, cfg))
                throw EngineError("psi is not annihilated by the minus operator on this region");

            Expr psi2 = diff(psi, p.vars.second);
            Expr p_psi = principal_apply(p, psi);
            bool structural_plus = equiv_zero(
                simplify(sub(p_psi, mul(pair.leading, mul(pair.residue_plus, psi2)))),
                p.vars, region, cfg);
            // Cross-multiplied commutativity witness: the operators commute
            // exactly when phi_2 * P[psi] matches psi_2 * P[phi].
            bool commute_twin = equiv_zero(
                simplify(sub(mul(phi2, p_psi), mul(psi2, p_phi))), p.vars, region, cfg);
            bool minus_twin = equiv_zero(p_phi, p.vars, region, cfg);
            bool plus_twin = equiv_zero(p_psi, p.vars, region, cfg);

            rep.map_form_consistent = structural_minus && structural_plus &&
                                      commute_twin == rep.commutes &&
                                      minus_twin == rep.residue_free_minus &&
                                      plus_twin == rep.residue_free_plus;
        }
    }
    return rep;
}

Expr parabolic_lambda_residue(const FirstOrderOp& op, const VarPair& vars) {
    if (!op.lambda) return number(0);
    return apply_op(op, *op.lambda, vars);
}

std::vector<Expr> probe_family(const VarPair& vars) {
    Expr x = symbol(vars.first);
    Expr y = symbol(vars.second);
    return {number(1),
            x,
            y,
            powr(x, Rational(2)),
            mul(x, y),
            powr(y, Rational(2)),
            powr(x, Rational(3)),
            call(Builtin::Exp, x),
            call(Builtin::Sin, y)};
}

}  // namespace characteristica
