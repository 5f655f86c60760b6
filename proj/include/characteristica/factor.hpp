#pragma once

#include <optional>
#include <utility>

#include "characteristica/pde.hpp"

namespace characteristica {

// First-order directional operator alpha*D1 + beta*D2 over the PDE's
// variable pair. When the operator is monic (alpha == 1), `lambda` carries
// the slope of the convention D1 - lambda*D2, i.e. beta == -lambda.
struct FirstOrderOp {
    Expr alpha, beta;
    std::optional<Expr> lambda;
};

// alpha * dw/d1 + beta * dw/d2, simplified.
[[nodiscard]] Expr apply_op(const FirstOrderOp& op, const Expr& w, const VarPair& vars);

// Principal-part factorization P = A * (minus after plus) + A*r_minus*D2
//                                = A * (plus after minus) + A*r_plus*D2,
// where A is `leading` and r_minus, r_plus are the composition residues. For
// monic pairs A = a and the residues reduce to L-[lambda+] and L+[lambda-];
// degenerate pairs (a == 0) keep the same algebra with non-monic operators.
struct FactorPair {
    PdeClass kind = PdeClass::Hyperbolic;  // Hyperbolic or Parabolic branch
    FirstOrderOp minus, plus;
    Expr leading;
    bool degenerate = false;
    Expr residue_minus, residue_plus;
};

// Builds the factor pair from the slopes. Hyperbolic: two monic operators
// (or the non-monic degenerate pair). Parabolic: the single operator
// duplicated. Throws for elliptic/mixed input (no real factorization).
[[nodiscard]] FactorPair factor_principal(const Pde2& p, const LambdaPair& lam, PdeClass kind);

// (r_minus, r_plus): the first-order leftovers that distinguish the two
// composition orders from the principal part. Computed from the general
// composition -L∓[beta±], which agrees with L∓[lambda±] on monic pairs and
// stays meaningful on degenerate ones.
[[nodiscard]] std::pair<Expr, Expr> residue_terms(const FactorPair& pair, const VarPair& vars);

struct CommutatorReport {
    Expr r_minus, r_plus;
    Expr commutator;  // r_plus - r_minus: the D2 coefficient of [L-, L+]
    bool commutes = false;
    bool residue_free_minus = false;  // r_minus vanishes
    bool residue_free_plus = false;
    // With a supplied invariant pair: whether every phi/psi-form twin agreed
    // with the residue verdicts (phi_2*P[psi] = psi_2*P[phi] for commuting,
    // P[phi] = A*r_minus*phi_2 and the psi mirror for the one-sided checks).
    std::optional<bool> map_form_consistent;
};

// The commutativity/residue verdicts. `invariants`, when present, is the
// (phi, psi) pair of the transition map; phi must be annihilated by L+ and
// (on hyperbolic pairs) psi by L-, or the report throws. For parabolic pairs
// only phi participates in the map-form cross-check.
[[nodiscard]] CommutatorReport commutator_report(const Pde2& p, const FactorPair& pair,
                                                 const std::optional<std::pair<Expr, Expr>>& invariants,
                                                 const SampleRegion& region,
                                                 const OracleConfig& cfg);

// L[lambda] for the parabolic operator; zero exactly when the principal part
// is a perfect operator square A*L*L.
[[nodiscard]] Expr parabolic_lambda_residue(const FirstOrderOp& op, const VarPair& vars);

// The documented probe family {1, v1, v2, v1^2, v1*v2, v2^2, v1^3, e^{v1},
// sin v2} used by the operator-identity property checks.
[[nodiscard]] std::vector<Expr> probe_family(const VarPair& vars);

}  // namespace characteristica
