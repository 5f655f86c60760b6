#pragma once

#include <optional>
#include <string>
#include <vector>

#include "characteristica/factor.hpp"
#include "characteristica/oracle.hpp"

namespace characteristica {

enum class CharFamily { Plus, Minus, Parabolic };
[[nodiscard]] const char* char_family_name(CharFamily f);

// dv2/dv1 = rhs along the characteristic family of one first-order factor.
// `vertical` marks the degenerate factor D2, whose curves are the coordinate
// lines v1 = const (no slope function exists).
struct CharacteristicOde {
    CharFamily family = CharFamily::Plus;
    Expr rhs;
    bool vertical = false;
};

// One ODE per distinct factor: two for hyperbolic pairs, one for parabolic.
[[nodiscard]] std::vector<CharacteristicOde> char_odes(const FactorPair& pair,
                                                       const VarPair& vars);

enum class Provenance { Solved, UserSupplied, FixtureSupplied };
[[nodiscard]] const char* provenance_name(Provenance p);

struct Invariant {
    Expr phi;
    CharFamily family = CharFamily::Plus;
    Provenance provenance = Provenance::Solved;
};

// Closed-form first integral of the ODE, or empty when the equation falls
// outside the solvable catalog (v2-free slope, v1-free slope, separable) or
// a candidate fails its own certificate. Every returned invariant satisfies
// phi_1 + R*phi_2 == 0 on the region with a nonvanishing gradient, and is
// oriented so phi_2 > 0 at the region center when that sign is determined.
[[nodiscard]] std::optional<Invariant> solve_invariant(const CharacteristicOde& ode,
                                                       const VarPair& vars,
                                                       const SampleRegion& region,
                                                       const OracleConfig& cfg);

// phi is a first integral of op's characteristic flow: op annihilates it and
// its gradient stays away from zero on the region.
[[nodiscard]] bool verify_invariant(const FirstOrderOp& op, const Expr& phi,
                                    const VarPair& vars, const SampleRegion& region,
                                    const OracleConfig& cfg);

// min over samples of phi_1^2 + phi_2^2 >= guard_eps.
[[nodiscard]] bool gradient_nonvanishing(const Expr& phi, const VarPair& vars,
                                         const SampleRegion& region, const OracleConfig& cfg);

// Same level sets: the Jacobian p_1*q_2 - p_2*q_1 vanishes identically while
// both gradients stay nonzero. Used to reject psi choices that duplicate phi.
[[nodiscard]] bool invariant_equivalent(const Expr& p, const Expr& q, const VarPair& vars,
                                        const SampleRegion& region, const OracleConfig& cfg);

// A numerically traced characteristic curve through `seed`, stepped by
// arc length in both directions until it leaves the region, closes up, or
// hits a domain fault.
struct Curve {
    std::vector<SamplePoint> points;
    SamplePoint seed{0, 0};
    double step = 0;
    bool truncated = false;  // stopped on a fault or step underflow, not the boundary
    bool closed = false;     // returned to the seed: a closed orbit
    std::optional<double> invariant_at_seed;
    double invariant_drift = 0;  // max |phi(p) - phi(seed)| / (1 + |phi(seed)|)
    double max_ode_gap = 0;      // post-hoc max |dy/dx - R(midpoint)| over genuine x-steps
};

// Integrates dp = s*(1, R)/|(1, R)| with classical RK4, keeping s continuous
// by aligning every stage with the previous direction, so curves ride through
// vertical tangents (R -> +-inf) instead of stopping. When `invariant` is
// given its drift along each curve is recorded.
[[nodiscard]] std::vector<Curve> trace_curves(const CharacteristicOde& ode, const VarPair& vars,
                                              const std::vector<SamplePoint>& seeds,
                                              const SampleRegion& region, double h,
                                              const std::optional<Expr>& invariant,
                                              const OracleConfig& cfg);

// Field-line tracer for an arbitrary first-order operator: follows the
// oriented direction (alpha, beta)/|(alpha, beta)| without sign alignment.
// Backs the operator plots.
[[nodiscard]] std::vector<Curve> trace_field_lines(const FirstOrderOp& op, const VarPair& vars,
                                                   const std::vector<SamplePoint>& seeds,
                                                   const SampleRegion& region, double h,
                                                   const std::optional<Expr>& invariant,
                                                   const OracleConfig& cfg);

}  // namespace characteristica
