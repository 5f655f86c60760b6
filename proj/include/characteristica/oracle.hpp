#pragma once

#include <cstdint>
#include <vector>

#include "characteristica/expr.hpp"
#include "characteristica/parallel.hpp"

namespace characteristica {

// Seed used everywhere unless the caller (or CHARACTERISTICA_SEED) overrides.
inline constexpr std::uint64_t kDefaultOracleSeed = 123456789u;

struct OracleConfig {
    int samples = 64;
    double tol_abs = 1e-9;
    double tol_rel = 1e-9;
    double guard_eps = 1e-3;  // guards must stay at least this far from zero
    std::uint64_t seed = kDefaultOracleSeed;
    par::Mode mode = par::default_mode();
};

struct SamplePoint {
    double a, b;  // values of vars.first and vars.second
};

// Rectangle in the two declared variables with guard expressions. Bounds are
// exact rationals so the region's center can be substituted into trees
// without rounding.
struct SampleRegion {
    Rational lo1{0}, hi1{1}, lo2{0}, hi2{1};
    std::vector<DomainGuard> guards;

    [[nodiscard]] SamplePoint center() const {
        return {(lo1 + hi1).value() / 2.0, (lo2 + hi2).value() / 2.0};
    }
    [[nodiscard]] Rational center1() const { return (lo1 + hi1) * Rational(1, 2); }
    [[nodiscard]] Rational center2() const { return (lo2 + hi2) * Rational(1, 2); }
};

// Deterministic guarded sampling: a fixed-seed generator draws uniform points,
// rejecting any at which some guard faults, is within guard_eps of zero, or
// (for positivity guards) is below guard_eps. Guards of the scanned
// expressions are added automatically, so callers only provide geometric or
// problem-level guards. Throws EngineError when the region is exhausted.
[[nodiscard]] std::vector<SamplePoint> draw_samples(const VarPair& vars,
                                                    const SampleRegion& region,
                                                    const OracleConfig& cfg,
                                                    const std::vector<DomainGuard>& extra = {});

struct EquivReport {
    bool equal = false;
    // max over samples of |value| / (tol_abs + tol_rel * scale); <= 1 passes.
    double max_violation = 0.0;
    double max_abs = 0.0;
    SamplePoint worst{0, 0};
    int samples = 0;
};

// Numeric zero-identity oracle: e vanishes on the region when |e(p)| stays
// within tol_abs + tol_rel * scale(p) at every sample, where scale(p) is the
// largest magnitude among e's top-level additive terms at p. Never proves,
// only certifies to tolerance; a single violation refutes.
[[nodiscard]] EquivReport equiv_zero_report(const Expr& e, const VarPair& vars,
                                            const SampleRegion& region, const OracleConfig& cfg);
[[nodiscard]] bool equiv_zero(const Expr& e, const VarPair& vars, const SampleRegion& region,
                              const OracleConfig& cfg);
[[nodiscard]] bool oracle_equal(const Expr& a, const Expr& b, const VarPair& vars,
                                const SampleRegion& region, const OracleConfig& cfg);

// True when |e| >= guard_eps at every sample; the certificate that dividing
// or normalizing by e is safe on this region.
[[nodiscard]] bool certify_nonvanishing(const Expr& e, const VarPair& vars,
                                        const SampleRegion& region, const OracleConfig& cfg);

// Max over samples of |symbolic - central difference| / (1 + |symbolic|) for
// d e / d var, with step h. The cross-check that differentiation is wired to
// the same semantics evaluation uses.
[[nodiscard]] double fd_derivative_gap(const Expr& e, const std::string& var,
                                       const VarPair& vars, const SampleRegion& region,
                                       const OracleConfig& cfg, double h = 1e-6);

}  // namespace characteristica
