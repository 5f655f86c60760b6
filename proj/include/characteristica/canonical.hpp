#pragma once

#include <optional>
#include <string>
#include <vector>

#include "characteristica/chars.hpp"

namespace characteristica {

// (xi, eta) = (phi(v1,v2), psi(v1,v2)), with an optional certified inverse
// v1 = inv_phi(xi,eta), v2 = inv_psi(xi,eta). `kind` fixes which validity
// conditions were checked at build time (hyperbolic: independent families;
// parabolic: phi characteristic, psi a completion).
struct TransitionMap {
    VarPair vars;  // source variables
    Expr phi, psi;
    Provenance phi_from = Provenance::Solved;
    Provenance psi_from = Provenance::Solved;
    std::optional<Expr> inv_phi, inv_psi;
    PdeClass kind = PdeClass::Hyperbolic;

    [[nodiscard]] bool has_inverse() const { return inv_phi && inv_psi; }
    // render a target-coordinate expression in source coordinates
    [[nodiscard]] Expr to_source(const Expr& target_expr) const;
    // render a source-coordinate expression in target coordinates
    [[nodiscard]] Expr to_target(const Expr& source_expr) const;
    [[nodiscard]] Expr jacobian() const;  // phi_1*psi_2 - phi_2*psi_1
};

// Hyperbolic map: phi and psi must be invariants of the plus/minus factors,
// belong to genuinely different families, and have a nonvanishing Jacobian.
// A supplied inverse is validated (round trips + Jacobian reciprocity).
[[nodiscard]] TransitionMap build_map(const Pde2& p, const FactorPair& pair,
                                      const Invariant& phi, const Invariant& psi,
                                      const std::optional<std::pair<Expr, Expr>>& inverse,
                                      const SampleRegion& region, const OracleConfig& cfg);

// Parabolic map: phi is the characteristic invariant; psi, when not given,
// is completed from the coordinate functions v1 then v2, the first one with
// L[psi] bounded away from zero, principal[psi] == 0, and a nonvanishing
// Jacobian against phi.
[[nodiscard]] TransitionMap build_map_parabolic(const Pde2& p, const FactorPair& pair,
                                                const Invariant& phi,
                                                const std::optional<Expr>& user_psi,
                                                const std::optional<std::pair<Expr, Expr>>& inverse,
                                                const SampleRegion& region,
                                                const OracleConfig& cfg);

// Coefficients of the transformed equation collected by derivative slot:
//   uxixi*U_11 + uxieta*U_12 + uetaeta*U_22 + uxi*U_1 + ueta*U_2 + u*U = rhs.
struct CanonicalSlots {
    Expr uxixi, uxieta, uetaeta, uxi, ueta, u, rhs;
};

inline constexpr const char* kSlotNames[7] = {"uxixi", "uxieta", "uetaeta",
                                              "uxi",   "ueta",   "u",
                                              "rhs"};
[[nodiscard]] std::vector<Expr> slot_list(const CanonicalSlots& s);

struct CanonicalForm {
    std::string method;  // "compact" | "chain-rule" | "inverse-map"
    PdeClass kind = PdeClass::Hyperbolic;
    CanonicalSlots source;                 // slots as functions of the source variables
    std::optional<CanonicalSlots> target;  // slots as functions of (xi, eta), when renderable
    // Raw slots divided by the leading slot (U_12 hyperbolic, U_22 parabolic)
    // only when that slot certifies nonvanishing; the divisor is recorded.
    std::optional<Expr> normalized_by;
    std::optional<CanonicalSlots> normalized;         // in source coordinates
    std::optional<CanonicalSlots> normalized_target;  // in (xi, eta)
};

// Method I: the compact operator form. Second-order slots from
// A*L-[phi]*L+[psi] (hyperbolic) or A*(L[psi])^2 (parabolic) plus the
// residue-carried first-order parts; lower-order terms via the first-order
// substitutions.
[[nodiscard]] CanonicalForm reduce_compact(const Pde2& p, const FactorPair& pair,
                                           const TransitionMap& map, const SampleRegion& region,
                                           const OracleConfig& cfg);

// Method III: full chain-rule expansion of every slot, then an oracle check
// that the slots a characteristic map must kill actually vanish.
[[nodiscard]] CanonicalForm reduce_chain_rule(const Pde2& p, const TransitionMap& map,
                                              const SampleRegion& region, const OracleConfig& cfg);

// Method II: assembly purely from the inverse map's partial derivatives in
// target coordinates; source rendering by forward substitution. Requires the
// map's inverse and a monic factorization (a != 0).
[[nodiscard]] CanonicalForm reduce_inverse_map(const Pde2& p, const TransitionMap& map,
                                               const SampleRegion& region,
                                               const OracleConfig& cfg);

// All supplied forms agree slot by slot (raw, unnormalized, compared in
// source coordinates) to oracle tolerance. Requires at least two forms.
[[nodiscard]] bool cross_validate(const std::vector<CanonicalForm>& forms, const VarPair& vars,
                                  const SampleRegion& region, const OracleConfig& cfg);

// One zero/nonzero verdict with the expression that witnessed it.
struct ConditionWitness {
    Expr witness;
    bool zero = false;
};

// The inverse-map forms of the factor-condition verdicts, built from nothing
// but partial derivatives of the inverse pair. Hyperbolic: the mixed-partial
// twins (phi commutator test, both-residues test, and the one-sided
// cross-multiplied ratios). Parabolic: the eta-eta twins and the identity
// psi_xi*phi_etaeta == phi_xi*psi_etaeta.
struct InverseConditionReport {
    PdeClass kind = PdeClass::Hyperbolic;
    std::optional<ConditionWitness> phi_xieta, psi_xieta;
    std::optional<ConditionWitness> residue_minus_twin, residue_plus_twin;
    std::optional<ConditionWitness> phi_etaeta, psi_etaeta, parabolic_identity;
    std::optional<bool> commutes, residue_free;
};

[[nodiscard]] InverseConditionReport inverse_condition_report(const TransitionMap& map,
                                                              const SampleRegion& region,
                                                              const OracleConfig& cfg);

}  // namespace characteristica
