#pragma once

#include <optional>
#include <string>

#include "characteristica/oracle.hpp"

namespace characteristica {

// Second-order linear PDE in two variables,
//
//   a u_11 + 2 b u_12 + c u_22 + d u_1 + e u_2 + g u = f,
//
// where 1, 2 index the declared variable pair. b holds HALF the collected
// cross coefficient, so the printed principal part always reads "2b u_12".
struct Pde2 {
    VarPair vars;
    Expr a, b, c, d, e, g, f;
    std::string text;  // the input equation, echoed in reports
};

// Parses "lhs = rhs" where each side is an expression over the declared
// variables and the unknown-function tokens u, u_1, u_2, u_11, u_12, u_21,
// u_22 spelled with the variable names (u_x, u_xy, ... for vars x,y). The
// u-tokens must enter linearly; u_21 folds into the u_12 slot; everything is
// moved left of the equals sign except the u-free forcing term, which
// becomes f.
[[nodiscard]] Pde2 parse_pde(const std::string& text, const VarPair& vars);

// a w_11 + 2b w_12 + c w_22: the principal operator applied to a known
// scalar function (not to the unknown u).
[[nodiscard]] Expr principal_apply(const Pde2& p, const Expr& w);

// Full known-function application a w_11 + 2b w_12 + c w_22 + d w_1 + e w_2.
// This is the U_xi / U_eta slot source in every reduction method: the g u
// term never lands on these slots because u itself is not substituted.
[[nodiscard]] Expr op_apply_full(const Pde2& p, const Expr& w);

// The quadratic characteristic form a w_1^2 + 2b w_1 w_2 + c w_2^2; its
// vanishing is what makes the level curves of w characteristic.
[[nodiscard]] Expr char_form(const Pde2& p, const Expr& w);

// b^2 - a c, simplified.
[[nodiscard]] Expr discriminant(const Pde2& p);

enum class PdeClass { Hyperbolic, Parabolic, Elliptic, Mixed };
[[nodiscard]] const char* pde_class_name(PdeClass k);

struct Classification {
    PdeClass kind = PdeClass::Mixed;
    Expr delta;  // the discriminant expression
    // sample evidence: counts of sign observations against the per-point
    // threshold tol_abs + tol_rel * scale, plus the extreme values seen
    int positive = 0, negative = 0, near_zero = 0;
    double min_value = 0.0, max_value = 0.0;
    SamplePoint witness_positive{0, 0}, witness_negative{0, 0};
};

// Sign of the discriminant over guarded samples: positive everywhere ->
// Hyperbolic, within tolerance of zero everywhere -> Parabolic, negative
// everywhere -> Elliptic, anything else -> Mixed with witnesses.
[[nodiscard]] Classification classify(const Pde2& p, const SampleRegion& region,
                                      const OracleConfig& cfg);

// A square root of the discriminant usable in the root formulas: root^2
// equals delta on the region (oracle-certified) and root is nonnegative at
// every sample. `exact` marks that the sqrt wrapper was eliminated
// symbolically (polynomial or single-product perfect squares); otherwise the
// root keeps a sqrt node and stays numerically honest.
struct RootSplit {
    Expr root;
    bool exact = false;
};
[[nodiscard]] RootSplit radical_root(const Expr& delta, const VarPair& vars,
                                     const SampleRegion& region, const OracleConfig& cfg);

struct LambdaPair {
    // monic slopes: operator = D1 - lambda D2. Absent slots mark the
    // degenerate a == 0 branch where one factor is plain D2.
    std::optional<Expr> plus, minus;
    bool degenerate = false;
    RootSplit root;  // the sqrt(delta) that entered the formulas
};

// Lambda^± = (-b ± root)/a for hyperbolic input, the double root -b/a for
// parabolic input; a == 0 falls to the non-monic factor representation
// (lambda_plus = -c/(2b) when b != 0, both absent when only c survives).
[[nodiscard]] LambdaPair lambdas(const Pde2& p, PdeClass kind, const SampleRegion& region,
                                 const OracleConfig& cfg);

}  // namespace characteristica
