#pragma once

#include <optional>
#include <string>
#include <vector>

#include "characteristica/canonical.hpp"

namespace characteristica {

// One additive piece coeff * F(arg) of a general solution; `slot` names which
// of the two arbitrary one-variable functions the piece consumes.
struct SolutionTerm {
    Expr coeff;
    char slot = 'F';  // 'F' or 'G'
    Expr arg;
};

// u = base + sum of the pieces, F and G arbitrary smooth one-variable
// functions. `coords` names the variables everything is written in: the
// target pair (xi, eta) as produced by the catalog, the source pair after
// pull_back.
struct GeneralSolution {
    std::vector<SolutionTerm> terms;
    std::optional<Expr> base;
    std::string rule;  // catalog pattern that fired, e.g. "U_12 = 0"
    VarPair coords;

    [[nodiscard]] std::string text() const;
};

// Concrete stand-ins for the arbitrary functions, used to turn a template
// into closed forms a residual check can exercise.
enum class ProbeFn { Sin, Cos, Exp, Square, Cube, Id };

[[nodiscard]] Expr probe_apply(ProbeFn fn, const Expr& arg);
[[nodiscard]] Expr instantiate(const GeneralSolution& sol, ProbeFn f, ProbeFn g);

// Rewrite a target-coordinate solution in the source variables by
// substituting xi -> phi, eta -> psi everywhere.
[[nodiscard]] GeneralSolution pull_back(const GeneralSolution& sol, const TransitionMap& map);

// Match the reduced equation's raw slots against the closed-form catalog:
//
//   U_12 = 0                 ->  F(xi) + G(eta)
//   U_12 = U_1               ->  exp(eta)*F(xi) + G(eta)
//   2*eta*U_12 + U_1 = 0     ->  eta^(-1/2)*F(xi) + G(eta)
//   U_22 = 0                 ->  eta*F(xi) + G(xi)
//   eta*U_22 = U_2           ->  eta^2*F(xi) + G(xi)
//   U_22 = r(eta)            ->  B(eta) + eta*F(xi) + G(xi),  B'' = r
//
// All pattern tests are cross-multiplied against the leading slot, so they
// are insensitive to the overall scale of the reduced equation. The last
// pattern needs the map's inverse (to read the forcing term as a function of
// eta) and a catalog antiderivative for B; anything else yields an empty
// result rather than a guess.
[[nodiscard]] std::optional<GeneralSolution> solve_canonical(const CanonicalForm& form,
                                                             const TransitionMap& map,
                                                             const SampleRegion& region,
                                                             const OracleConfig& cfg);

// Constant-coefficient homogeneous hyperbolic shortcut: travelling-wave
// arguments straight from the roots, u = F(v2 + l_plus*v1) + G(v2 + l_minus*v1).
[[nodiscard]] std::optional<GeneralSolution> dalembert(const Pde2& p, const SampleRegion& region,
                                                       const OracleConfig& cfg);

// Residual of a candidate u against the equation, judged two independent
// ways: the zero oracle on the symbolically expanded residual, and a finite
// difference evaluation of every derivative on a 9-point stencil (which
// never touches the symbolic derivatives of u). A stencil that faults
// excludes the sample; losing half of them fails the check.
struct ResidualReport {
    EquivReport symbolic;
    bool symbolic_ok = false;
    double fd_max_violation = 0.0;  // max |r| / (tol_abs + tol_rel*scale); <= 1 passes
    double fd_max_abs = 0.0;
    int fd_samples = 0;
    int fd_excluded = 0;
    bool fd_ok = false;

    [[nodiscard]] bool ok() const { return symbolic_ok && fd_ok; }
};

[[nodiscard]] ResidualReport residual(const Pde2& p, const Expr& u, const SampleRegion& region,
                                      const OracleConfig& cfg, double fd_h = 1e-4,
                                      double fd_tol_abs = 1e-6, double fd_tol_rel = 1e-6);

}  // namespace characteristica
