#include "characteristica/canonical.hpp"

#include <functional>

namespace characteristica {

Expr TransitionMap::to_source(const Expr& target_expr) const {
    VarPair tv = target_vars();
    return simplify(substitute_pair(target_expr, tv.first, phi, tv.second, psi));
}

Expr TransitionMap::to_target(const Expr& source_expr) const {
    if (!has_inverse()) throw EngineError("map has no inverse to render target coordinates");
    return simplify(substitute_pair(source_expr, vars.first, *inv_phi, vars.second, *inv_psi));
}

Expr TransitionMap::jacobian() const {
    return simplify(sub(mul(diff(phi, vars.first), diff(psi, vars.second)),
                        mul(diff(phi, vars.second), diff(psi, vars.first))));
}

// Round trips and entrywise Jacobian reciprocity; throws on the first miss.
static void validate_inverse(const TransitionMap& m, const SampleRegion& region,
                             const OracleConfig& cfg) {
    VarPair tv = target_vars();
    Expr rt1 = simplify(sub(m.to_source(*m.inv_phi), symbol(m.vars.first)));
    if (!equiv_zero(rt1, m.vars, region, cfg))
        throw EngineError("inverse map fails its round trip in the first variable");
    Expr rt2 = simplify(sub(m.to_source(*m.inv_psi), symbol(m.vars.second)));
    if (!equiv_zero(rt2, m.vars, region, cfg))
        throw EngineError("inverse map fails its round trip in the second variable");

    Expr phi1 = diff(m.phi, m.vars.first), phi2 = diff(m.phi, m.vars.second);
    Expr psi1 = diff(m.psi, m.vars.first), psi2 = diff(m.psi, m.vars.second);
    // inverse partials composed with the forward map, so all four identity
    // entries are source-coordinate statements
    Expr pxi = m.to_source(diff(*m.inv_phi, tv.first));
    Expr peta = m.to_source(diff(*m.inv_phi, tv.second));
    Expr qxi = m.to_source(diff(*m.inv_psi, tv.first));
    Expr qeta = m.to_source(diff(*m.inv_psi, tv.second));

    Expr entries[4] = {
        simplify(sub(add(mul(pxi, phi1), mul(peta, psi1)), number(1))),
        simplify(add(mul(pxi, phi2), mul(peta, psi2))),
        simplify(add(mul(qxi, phi1), mul(qeta, psi1))),
        simplify(sub(add(mul(qxi, phi2), mul(qeta, psi2)), number(1))),
    };
    for (const Expr& entry : entries)
        if (!equiv_zero(entry, m.vars, region, cfg))
            throw EngineError("inverse map fails the Jacobian reciprocity identity");
}

TransitionMap build_map(const Pde2& p, const FactorPair& pair, const Invariant& phi,
                        const Invariant& psi, const std::optional<std::pair<Expr, Expr>>& inverse,
                        const SampleRegion& region, const OracleConfig& cfg) {
    if (pair.kind != PdeClass::Hyperbolic)
        throw EngineError("two-family map construction applies to hyperbolic pairs only");
    TransitionMap m;
    m.vars = p.vars;
    m.kind = PdeClass::Hyperbolic;
    m.phi = simplify(phi.phi);
    m.psi = simplify(psi.phi);
    m.phi_from = phi.provenance;
    m.psi_from = psi.provenance;

    if (!verify_invariant(pair.plus, m.phi, p.vars, region, cfg))
        throw EngineError("phi is not a plus-family invariant on this region");
    if (!verify_invariant(pair.minus, m.psi, p.vars, region, cfg))
        throw EngineError("psi is not a minus-family invariant on this region");
    if (invariant_equivalent(m.phi, m.psi, p.vars, region, cfg))
        throw EngineError("phi and psi share level sets; the map needs two independent families");
    if (!certify_nonvanishing(m.jacobian(), p.vars, region, cfg))
        throw EngineError("map Jacobian is not bounded away from zero on the region");

    if (inverse) {
        m.inv_phi = simplify(inverse->first);
        m.inv_psi = simplify(inverse->second);
        validate_inverse(m, region, cfg);
    }
    return m;
}

TransitionMap build_map_parabolic(const Pde2& p, const FactorPair& pair, const Invariant& phi,
                                  const std::optional<Expr>& user_psi,
                                  const std::optional<std::pair<Expr, Expr>>& inverse,
                                  const SampleRegion& region, const OracleConfig& cfg) {
    if (pair.kind != PdeClass::Parabolic)
        throw EngineError("coordinate-completion map construction applies to parabolic pairs");
    TransitionMap m;
    m.vars = p.vars;
    m.kind = PdeClass::Parabolic;
    m.phi = simplify(phi.phi);
    m.phi_from = phi.provenance;

    if (!verify_invariant(pair.minus, m.phi, p.vars, region, cfg))
        throw EngineError("phi is not a characteristic invariant on this region");

    // psi must move along the characteristics (L[psi] bounded away from
    // zero), carry no second-order contribution of its own
    // (principal[psi] == 0), and stay independent of phi.
    auto psi_ok = [&](const Expr& cand) {
        Expr along = apply_op(pair.minus, cand, p.vars);
        if (!certify_nonvanishing(along, p.vars, region, cfg)) return false;
        if (!equiv_zero(simplify(principal_apply(p, cand)), p.vars, region, cfg)) return false;
        Expr jac = simplify(sub(mul(diff(m.phi, p.vars.first), diff(cand, p.vars.second)),
                                mul(diff(m.phi, p.vars.second), diff(cand, p.vars.first))));
        return certify_nonvanishing(jac, p.vars, region, cfg);
    };

    if (user_psi) {
        Expr cand = simplify(*user_psi);
        if (!psi_ok(cand))
            throw EngineError("supplied psi fails the parabolic completion conditions");
        m.psi = cand;
        m.psi_from = Provenance::UserSupplied;
    } else {
        bool found = false;
        for (const std::string& name : {p.vars.first, p.vars.second}) {
            Expr cand = symbol(name);
            if (psi_ok(cand)) {
                m.psi = cand;
                m.psi_from = Provenance::Solved;
                found = true;
                break;
            }
        }
        if (!found)
            throw EngineError(
                "neither coordinate completes the parabolic map here; supply psi explicitly");
    }

    if (inverse) {
        m.inv_phi = simplify(inverse->first);
        m.inv_psi = simplify(inverse->second);
        validate_inverse(m, region, cfg);
    }
    return m;
}

std::vector<Expr> slot_list(const CanonicalSlots& s) {
    return {s.uxixi, s.uxieta, s.uetaeta, s.uxi, s.ueta, s.u, s.rhs};
}

static CanonicalSlots map_slots(const CanonicalSlots& s, const std::function<Expr(const Expr&)>& f) {
    return {f(s.uxixi), f(s.uxieta), f(s.uetaeta), f(s.uxi), f(s.ueta), f(s.u), f(s.rhs)};
}

// u_1 = phi_1 U_xi + psi_1 U_eta and the v2 mirror turn d u_1 + e u_2 + g u
// = f into slot contributions; identical for all three methods.
static void add_lower_order(CanonicalSlots& s, const Expr& d, const Expr& e, const Expr& g,
                            const Expr& f, const Expr& phi1, const Expr& phi2, const Expr& psi1,
                            const Expr& psi2) {
    s.uxi = simplify(add(s.uxi, add(mul(d, phi1), mul(e, phi2))));
    s.ueta = simplify(add(s.ueta, add(mul(d, psi1), mul(e, psi2))));
    s.u = simplify(g);
    s.rhs = simplify(f);
}

// Divide by the leading slot when certified safe; fills the normalized
// renderings in both coordinate systems.
static void attach_normalization(CanonicalForm& f, const VarPair& vars,
                                 const SampleRegion& region, const OracleConfig& cfg) {
    const Expr& lead =
        f.kind == PdeClass::Hyperbolic ? f.source.uxieta : f.source.uetaeta;
    if (!certify_nonvanishing(lead, vars, region, cfg)) return;
    f.normalized_by = lead;
    f.normalized = map_slots(f.source, [&](const Expr& s) { return simplify(div(s, lead)); });
    if (f.target) {
        const Expr& lead_t =
            f.kind == PdeClass::Hyperbolic ? f.target->uxieta : f.target->uetaeta;
        f.normalized_target =
            map_slots(*f.target, [&](const Expr& s) { return simplify(div(s, lead_t)); });
    }
}

static CanonicalSlots zero_slots() {
    Expr z = number(0);
    return {z, z, z, z, z, z, z};
}

CanonicalForm reduce_compact(const Pde2& p, const FactorPair& pair, const TransitionMap& map,
                             const SampleRegion& region, const OracleConfig& cfg) {
    CanonicalForm f;
    f.method = "compact";
    f.kind = pair.kind;
    CanonicalSlots s = zero_slots();

    Expr phi1 = diff(map.phi, p.vars.first), phi2 = diff(map.phi, p.vars.second);
    Expr psi1 = diff(map.psi, p.vars.first), psi2 = diff(map.psi, p.vars.second);

    if (pair.kind == PdeClass::Hyperbolic) {
        Expr lm_phi = apply_op(pair.minus, map.phi, p.vars);
        Expr lp_psi = apply_op(pair.plus, map.psi, p.vars);
        s.uxieta = simplify(mul(pair.leading, mul(lm_phi, lp_psi)));
        // principal applied to an invariant collapses to the residue term,
        // so these are the A*r*d2 contributions in closed form
        s.uxi = simplify(principal_apply(p, map.phi));
        s.ueta = simplify(principal_apply(p, map.psi));
    } else {
        Expr l_psi = apply_op(pair.minus, map.psi, p.vars);
        s.uetaeta = simplify(mul(pair.leading, mul(l_psi, l_psi)));
        s.uxi = simplify(principal_apply(p, map.phi));
        // a valid parabolic map has principal[psi] == 0: nothing lands here
    }
    add_lower_order(s, p.d, p.e, p.g, p.f, phi1, phi2, psi1, psi2);
    f.source = s;
    if (map.has_inverse()) f.target = map_slots(s, [&](const Expr& e) { return map.to_target(e); });
    attach_normalization(f, p.vars, region, cfg);
    return f;
}

CanonicalForm reduce_chain_rule(const Pde2& p, const TransitionMap& map,
                                const SampleRegion& region, const OracleConfig& cfg) {
    CanonicalForm f;
    f.method = "chain-rule";
    f.kind = map.kind;
    CanonicalSlots s = zero_slots();

    Expr phi1 = diff(map.phi, p.vars.first), phi2 = diff(map.phi, p.vars.second);
    Expr psi1 = diff(map.psi, p.vars.first), psi2 = diff(map.psi, p.vars.second);

    s.uxixi = simplify(char_form(p, map.phi));
    s.uetaeta = simplify(char_form(p, map.psi));
    Expr polar = add(mul(p.a, mul(phi1, psi1)),
                     add(mul(p.b, add(mul(phi1, psi2), mul(phi2, psi1))),
                         mul(p.c, mul(phi2, psi2))));
    s.uxieta = simplify(mul(number(2), polar));
    s.uxi = simplify(principal_apply(p, map.phi));
    s.ueta = simplify(principal_apply(p, map.psi));
    add_lower_order(s, p.d, p.e, p.g, p.f, phi1, phi2, psi1, psi2);

    // the whole point of a characteristic map: these slots must die
    if (map.kind == PdeClass::Hyperbolic) {
        if (!equiv_zero(s.uxixi, p.vars, region, cfg) ||
            !equiv_zero(s.uetaeta, p.vars, region, cfg))
            throw EngineError("map is not characteristic: a pure second-order slot survives");
    } else {
        if (!equiv_zero(s.uxixi, p.vars, region, cfg) ||
            !equiv_zero(s.uxieta, p.vars, region, cfg))
            throw EngineError("map is not characteristic: a pure second-order slot survives");
    }

    f.source = s;
    if (map.has_inverse()) f.target = map_slots(s, [&](const Expr& e) { return map.to_target(e); });
    attach_normalization(f, p.vars, region, cfg);
    return f;
}

CanonicalForm reduce_inverse_map(const Pde2& p, const TransitionMap& map,
                                 const SampleRegion& region, const OracleConfig& cfg) {
    if (!map.has_inverse())
        throw EngineError("inverse-map reduction requires the inverse pair");
    if (is_zero_literal(simplify(p.a)))
        throw EngineError("inverse-map reduction needs a monic factorization (nonzero leading "
                          "coefficient)");

    CanonicalForm f;
    f.method = "inverse-map";
    f.kind = map.kind;
    VarPair tv = target_vars();

    const Expr& P = *map.inv_phi;
    const Expr& Q = *map.inv_psi;
    Expr pxi = diff(P, tv.first), peta = diff(P, tv.second);
    Expr qxi = diff(Q, tv.first), qeta = diff(Q, tv.second);
    Expr det = simplify(sub(mul(pxi, qeta), mul(peta, qxi)));

    // forward partials recovered from the inverse Jacobian, as functions of
    // (xi, eta): the lower-order substitutions and the D2 = phi_2*Dxi +
    // psi_2*Deta expansion run entirely in target coordinates
    Expr phi1 = simplify(div(qeta, det)), phi2 = simplify(div(neg(peta), det));
    Expr psi1 = simplify(div(neg(qxi), det)), psi2 = simplify(div(pxi, det));

    Expr ahat = map.to_target(p.a);
    CanonicalSlots s = zero_slots();

    if (map.kind == PdeClass::Hyperbolic) {
        Expr pxieta = simplify(diff(pxi, tv.second));
        Expr qxieta = simplify(diff(qxi, tv.second));
        // L-[lambda+] through the inverse: (q_eta p_xieta - p_eta q_xieta) /
        // (p_xi p_eta^2)
        Expr rhat = simplify(div(sub(mul(qeta, pxieta), mul(peta, qxieta)),
                                 mul(pxi, mul(peta, peta))));
        s.uxieta = simplify(div(ahat, mul(pxi, peta)));
        s.uxi = simplify(mul(ahat, mul(rhat, phi2)));
        s.ueta = simplify(add(neg(div(mul(ahat, pxieta), mul(pxi, mul(peta, peta)))),
                              mul(ahat, mul(rhat, psi2))));
    } else {
        Expr petaeta = simplify(diff(peta, tv.second));
        Expr qetaeta = simplify(diff(qeta, tv.second));
        Expr peta3 = mul(peta, mul(peta, peta));
        // L[lambda] through the inverse: (p_etaeta q_eta - q_etaeta p_eta)
        // / p_eta^3
        Expr rhat = simplify(div(sub(mul(petaeta, qeta), mul(qetaeta, peta)), peta3));
        s.uetaeta = simplify(div(ahat, mul(peta, peta)));
        s.uxi = simplify(mul(ahat, mul(rhat, phi2)));
        s.ueta = simplify(add(neg(div(mul(ahat, petaeta), peta3)),
                              mul(ahat, mul(rhat, psi2))));
    }
    add_lower_order(s, map.to_target(p.d), map.to_target(p.e), map.to_target(p.g),
                    map.to_target(p.f), phi1, phi2, psi1, psi2);

    f.target = s;
    f.source = map_slots(s, [&](const Expr& e) { return map.to_source(e); });
    attach_normalization(f, p.vars, region, cfg);
    return f;
}

bool cross_validate(const std::vector<CanonicalForm>& forms, const VarPair& vars,
                    const SampleRegion& region, const OracleConfig& cfg) {
    if (forms.size() < 2) throw EngineError("cross-validation needs at least two forms");
    std::vector<Expr> base = slot_list(forms[0].source);
    for (std::size_t i = 1; i < forms.size(); ++i) {
        std::vector<Expr> other = slot_list(forms[i].source);
        for (std::size_t k = 0; k < base.size(); ++k)
            if (!equiv_zero(simplify(sub(other[k], base[k])), vars, region, cfg)) return false;
    }
    return true;
}

InverseConditionReport inverse_condition_report(const TransitionMap& map,
                                                const SampleRegion& region,
                                                const OracleConfig& cfg) {
    if (!map.has_inverse())
        throw EngineError("inverse-form conditions require the inverse pair");
    InverseConditionReport rep;
    rep.kind = map.kind;
    VarPair tv = target_vars();

    // witnesses live in target coordinates; their zeroness is judged after
    // composing with the forward map, so the source region does the sampling
    auto witness = [&](const Expr& w) {
        ConditionWitness cw{simplify(w), false};
        cw.zero = equiv_zero(map.to_source(cw.witness), map.vars, region, cfg);
        return cw;
    };

    const Expr& P = *map.inv_phi;
    const Expr& Q = *map.inv_psi;
    if (map.kind == PdeClass::Hyperbolic) {
        Expr pxi = diff(P, tv.first), peta = diff(P, tv.second);
        Expr qxi = diff(Q, tv.first), qeta = diff(Q, tv.second);
        Expr pxieta = diff(pxi, tv.second);
        Expr qxieta = diff(qxi, tv.second);
        rep.phi_xieta = witness(pxieta);
        rep.psi_xieta = witness(qxieta);
        rep.commutes = rep.phi_xieta->zero;
        rep.residue_free = rep.phi_xieta->zero && rep.psi_xieta->zero;
        // r+ == 0 iff q_xieta p_xi == q_xi p_xieta (lambda- carried through
        // the inverse); the r- mirror swaps xi-derivatives for eta ones
        rep.residue_plus_twin = witness(sub(mul(qxieta, pxi), mul(qxi, pxieta)));
        rep.residue_minus_twin = witness(sub(mul(qxieta, peta), mul(qeta, pxieta)));
    } else {
        Expr pxi = diff(P, tv.first), peta = diff(P, tv.second);
        Expr qxi = diff(Q, tv.first), qeta = diff(Q, tv.second);
        Expr petaeta = diff(peta, tv.second);
        Expr qetaeta = diff(qeta, tv.second);
        rep.phi_etaeta = witness(petaeta);
        rep.psi_etaeta = witness(qetaeta);
        rep.commutes = true;  // a single factor always commutes with itself
        rep.residue_free = rep.phi_etaeta->zero && rep.psi_etaeta->zero;
        rep.parabolic_identity = witness(sub(mul(qxi, petaeta), mul(pxi, qetaeta)));
    }
    return rep;
}

}  // namespace characteristica
