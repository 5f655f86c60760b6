#pragma once

#include <optional>

#include "characteristica/oracle.hpp"

namespace characteristica {

// Closed-form antiderivative of e with respect to var, from a fixed pattern
// catalog applied termwise after normalization:
//
//   - powers of the variable (including 1/v -> ln v),
//   - powers of a linear form (a*v + b)^n, n rational, n != -1, and 1/(a*v+b),
//   - exponentials exp(u) with u linear in v,
//   - sin/cos/sinh/cosh with a linear argument,
//   - exp(u) / (p*exp(w) + q) and 1 / (p*exp(w) + q) with matching growth
//     (the pattern behind integrals like e^x/(e^x - 1) -> ln(e^x - 1)),
//   - sums of the above with v-free factors carried through.
//
// Every hit is self-certified before being returned: diff(result, var) minus
// e must pass the zero oracle on `region` (a generic guarded square when the
// caller has no better region). A miss or a failed certificate yields an
// empty result, never a wrong one.
[[nodiscard]] std::optional<Expr> antiderivative(
    const Expr& e, const std::string& var, const VarPair& vars,
    const std::optional<SampleRegion>& region = std::nullopt,
    const OracleConfig& cfg = OracleConfig{});

}  // namespace characteristica
