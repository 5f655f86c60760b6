#include "characteristica/chars.hpp"

#include <cmath>
#include <functional>

#include "characteristica/antiderivative.hpp"

namespace characteristica {

const char* char_family_name(CharFamily f) {
    switch (f) {
        case CharFamily::Plus: return "plus";
        case CharFamily::Minus: return "minus";
        case CharFamily::Parabolic: return "parabolic";
    }
    return "?";
}

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::Solved: return "solved";
        case Provenance::UserSupplied: return "user";
        case Provenance::FixtureSupplied: return "fixture";
    }
    return "?";
}

static CharacteristicOde op_to_ode(const FirstOrderOp& op, CharFamily fam, const VarPair&) {
    CharacteristicOde ode;
    ode.family = fam;
    Expr alpha = simplify(op.alpha);
    if (is_zero_literal(alpha)) {
        ode.vertical = true;
        ode.rhs = number(0);
    } else {
        ode.rhs = simplify(div(op.beta, op.alpha));
    }
    return ode;
}

std::vector<CharacteristicOde> char_odes(const FactorPair& pair, const VarPair& vars) {
    if (pair.kind == PdeClass::Parabolic)
        return {op_to_ode(pair.minus, CharFamily::Parabolic, vars)};
    return {op_to_ode(pair.plus, CharFamily::Plus, vars),
            op_to_ode(pair.minus, CharFamily::Minus, vars)};
}

bool gradient_nonvanishing(const Expr& phi, const VarPair& vars, const SampleRegion& region,
                           const OracleConfig& cfg) {
    Expr g1 = diff(phi, vars.first);
    Expr g2 = diff(phi, vars.second);
    Expr mag = simplify(add(mul(g1, g1), mul(g2, g2)));
    return certify_nonvanishing(mag, vars, region, cfg);
}

bool verify_invariant(const FirstOrderOp& op, const Expr& phi, const VarPair& vars,
                      const SampleRegion& region, const OracleConfig& cfg) {
    return equiv_zero(apply_op(op, phi, vars), vars, region, cfg) &&
           gradient_nonvanishing(phi, vars, region, cfg);
}

bool invariant_equivalent(const Expr& p, const Expr& q, const VarPair& vars,
                          const SampleRegion& region, const OracleConfig& cfg) {
    Expr jac = simplify(sub(mul(diff(p, vars.first), diff(q, vars.second)),
                            mul(diff(p, vars.second), diff(q, vars.first))));
    return equiv_zero(jac, vars, region, cfg) && gradient_nonvanishing(p, vars, region, cfg) &&
           gradient_nonvanishing(q, vars, region, cfg);
}

// The invariant is valid when it is constant along the flow (phi_1 + R*phi_2
// for a sloped family, phi_2 alone for the vertical one) and its gradient
// stays away from zero. Returns the simplified invariant on success.
static std::optional<Expr> certify_first_integral(Expr phi, const CharacteristicOde& ode,
                                                  const VarPair& vars, const SampleRegion& region,
                                                  const OracleConfig& cfg) {
    phi = simplify(phi);
    Expr along = ode.vertical
                     ? diff(phi, vars.second)
                     : simplify(add(diff(phi, vars.first), mul(ode.rhs, diff(phi, vars.second))));
    if (!equiv_zero(along, vars, region, cfg)) return std::nullopt;
    if (!gradient_nonvanishing(phi, vars, region, cfg)) return std::nullopt;
    return phi;
}

// Fix the sign so phi_2 > 0 at the region center whenever that derivative is
// decisively signed there; keeps solved invariants stable across
// algebraically equivalent slope forms.
static Expr orient_invariant(Expr phi, const VarPair& vars, const SampleRegion& region) {
    SamplePoint c = region.center();
    auto v = eval_checked(diff(phi, vars.second), vars, c.a, c.b);
    if (v && *v < -1e-12) return simplify(neg(phi));
    return phi;
}

std::optional<Invariant> solve_invariant(const CharacteristicOde& ode, const VarPair& vars,
                                         const SampleRegion& region, const OracleConfig& cfg) {
    auto finish = [&](const Expr& candidate) -> std::optional<Invariant> {
        auto ok = certify_first_integral(candidate, ode, vars, region, cfg);
        if (!ok) return std::nullopt;
        return Invariant{orient_invariant(*ok, vars, region), ode.family, Provenance::Solved};
    };

    if (ode.vertical) return finish(symbol(vars.first));

    Expr R = simplify(ode.rhs);
    if (equiv_zero(R, vars, region, cfg)) return finish(symbol(vars.second));

    // Slope free of v2: integrate directly, v2 - int R dv1. The slice pins
    // v2 at the region center so the antiderivative sees one variable.
    if (equiv_zero(simplify(diff(R, vars.second)), vars, region, cfg)) {
        Expr sliced = simplify(substitute(R, vars.second, number(region.center2())));
        if (auto F = antiderivative(sliced, vars.first, vars, region, cfg))
            if (auto inv = finish(sub(symbol(vars.second), *F))) return inv;
    }

    // Slope free of v1: v1 - int dv2 / R.
    if (equiv_zero(simplify(diff(R, vars.first)), vars, region, cfg)) {
        Expr sliced = simplify(substitute(R, vars.first, number(region.center1())));
        if (auto F =
                antiderivative(simplify(div(number(1), sliced)), vars.second, vars, region, cfg))
            if (auto inv = finish(sub(symbol(vars.first), *F))) return inv;
    }

    // Separable slope R = f(v1)*g(v2), recognized through the cross ratio
    // R(v1,v2)*R(c1,c2) == R(v1,c2)*R(c1,v2). The slice point must keep
    // R(c1,c2) away from zero, so after the center a few rational offsets
    // inside the region are tried.
    Rational m1 = region.center1(), m2 = region.center2();
    Rational q1 = (region.hi1 - region.lo1) * Rational(1, 4);
    Rational q2 = (region.hi2 - region.lo2) * Rational(1, 4);
    for (const Rational& c1 : {m1, m1 - q1, m1 + q1}) {
        for (const Rational& c2 : {m2, m2 - q2, m2 + q2}) {
            Expr rx = simplify(substitute(R, vars.second, number(c2)));  // f(v1)*g(c2)
            Expr ry = simplify(substitute(R, vars.first, number(c1)));   // f(c1)*g(v2)
            Expr rc = simplify(substitute(rx, vars.first, number(c1)));  // f(c1)*g(c2)
            auto pivot = eval_checked(rc, vars, 0, 0);
            if (!pivot || !std::isfinite(*pivot) || std::abs(*pivot) < cfg.guard_eps) continue;
            Expr cross = simplify(sub(mul(R, rc), mul(rx, ry)));
            if (!equiv_zero(cross, vars, region, cfg)) continue;
            // Separated form: dv2 * (rc/ry) = rx * dv1, so the two one-sided
            // antiderivatives difference is a first integral.
            auto lhs = antiderivative(simplify(div(rc, ry)), vars.second, vars, region, cfg);
            if (!lhs) continue;
            auto rhs = antiderivative(rx, vars.first, vars, region, cfg);
            if (!rhs) continue;
            if (auto inv = finish(sub(*lhs, *rhs))) return inv;
        }
    }
    return std::nullopt;
}

// ---- curve tracing ----

namespace {

struct Dir {
    double x = 0, y = 0;
};

struct Tracer {
    std::function<std::optional<Dir>(const SamplePoint&)> field;
    bool align = false;  // keep stage directions on the previous side
    double lo1, hi1, lo2, hi2;

    [[nodiscard]] bool inside(const SamplePoint& p) const {
        return p.a >= lo1 && p.a <= hi1 && p.b >= lo2 && p.b <= hi2;
    }
};

std::optional<Dir> stage_dir(const Tracer& t, const SamplePoint& p, const Dir& prev) {
    auto d = t.field(p);
    if (!d) return std::nullopt;
    if (t.align && d->x * prev.x + d->y * prev.y < 0) {
        d->x = -d->x;
        d->y = -d->y;
    }
    return d;
}

bool rk4_step(const Tracer& t, SamplePoint& p, Dir& dir, double h) {
    auto k1 = stage_dir(t, p, dir);
    if (!k1) return false;
    auto k2 = stage_dir(t, {p.a + h / 2 * k1->x, p.b + h / 2 * k1->y}, *k1);
    if (!k2) return false;
    auto k3 = stage_dir(t, {p.a + h / 2 * k2->x, p.b + h / 2 * k2->y}, *k2);
    if (!k3) return false;
    auto k4 = stage_dir(t, {p.a + h * k3->x, p.b + h * k3->y}, *k3);
    if (!k4) return false;
    p.a += h / 6 * (k1->x + 2 * k2->x + 2 * k3->x + k4->x);
    p.b += h / 6 * (k1->y + 2 * k2->y + 2 * k3->y + k4->y);
    dir = *k4;
    return true;
}

constexpr int kStepCap = 200000;

void run_direction(const Tracer& t, const SamplePoint& start, Dir dir, double h,
                   bool detect_closure, std::vector<SamplePoint>& out, bool& truncated,
                   bool& closed) {
    SamplePoint p = start;
    for (int i = 0; i < kStepCap; ++i) {
        if (!rk4_step(t, p, dir, h)) {
            truncated = true;
            return;
        }
        if (!t.inside(p)) return;
        out.push_back(p);
        if (detect_closure && out.size() >= 20 &&
            std::hypot(p.a - start.a, p.b - start.b) < h / 2) {
            closed = true;
            return;
        }
    }
    truncated = true;
}

Curve trace_one(const Tracer& t, const SamplePoint& seed, double h,
                const std::optional<Expr>& invariant, const Expr* slope, const VarPair& vars) {
    Curve c;
    c.seed = seed;
    c.step = h;

    auto d0 = t.field(seed);
    if (!d0) {
        c.truncated = true;
        c.points = {seed};
        return c;
    }
    std::vector<SamplePoint> forward, backward;
    run_direction(t, seed, *d0, h, true, forward, c.truncated, c.closed);
    if (!c.closed) {
        // The reverse half: aligning tracers just start against d0, while an
        // oriented field must itself be flipped (its stages ignore `dir`).
        Tracer rev = t;
        if (!t.align) {
            auto base = t.field;
            rev.field = [base](const SamplePoint& p) -> std::optional<Dir> {
                auto d = base(p);
                if (d) {
                    d->x = -d->x;
                    d->y = -d->y;
                }
                return d;
            };
        }
        Dir back{-d0->x, -d0->y};
        run_direction(rev, seed, back, h, false, backward, c.truncated, c.closed);
    }
    c.points.reserve(backward.size() + forward.size() + 1);
    c.points.insert(c.points.end(), backward.rbegin(), backward.rend());
    c.points.push_back(seed);
    c.points.insert(c.points.end(), forward.begin(), forward.end());

    if (slope) {
        // Post-hoc consistency: secant slopes against the field at segment
        // midpoints, skipping near-vertical segments where the quotient
        // is ill-conditioned.
        for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
            double dx = c.points[i + 1].a - c.points[i].a;
            if (std::abs(dx) < h / 2) continue;
            double dy = c.points[i + 1].b - c.points[i].b;
            SamplePoint mid{(c.points[i].a + c.points[i + 1].a) / 2,
                            (c.points[i].b + c.points[i + 1].b) / 2};
            auto r = eval_checked(*slope, vars, mid.a, mid.b);
            if (!r) continue;
            c.max_ode_gap = std::max(c.max_ode_gap, std::abs(dy / dx - *r));
        }
    }
    if (invariant) {
        auto v0 = eval_checked(*invariant, vars, seed.a, seed.b);
        if (v0) {
            c.invariant_at_seed = *v0;
            for (const SamplePoint& p : c.points) {
                auto v = eval_checked(*invariant, vars, p.a, p.b);
                if (v)
                    c.invariant_drift =
                        std::max(c.invariant_drift, std::abs(*v - *v0) / (1 + std::abs(*v0)));
            }
        }
    }
    return c;
}

Tracer make_tracer(const SampleRegion& region) {
    Tracer t;
    t.lo1 = region.lo1.value();
    t.hi1 = region.hi1.value();
    t.lo2 = region.lo2.value();
    t.hi2 = region.hi2.value();
    return t;
}

}  // namespace

std::vector<Curve> trace_curves(const CharacteristicOde& ode, const VarPair& vars,
                                const std::vector<SamplePoint>& seeds, const SampleRegion& region,
                                double h, const std::optional<Expr>& invariant,
                                const OracleConfig& cfg) {
    Expr slope = simplify(ode.rhs);
    Tracer t = make_tracer(region);
    t.align = true;
    bool vertical = ode.vertical;
    // (1, R)/|(1, R)| tends to (0, +-1) as R blows up, so vertical tangents
    // are ordinary points of the arc-length field; hypot keeps the division
    // overflow-safe for extreme slopes.
    t.field = [&slope, &vars, vertical](const SamplePoint& p) -> std::optional<Dir> {
        if (vertical) return Dir{0, 1};
        auto r = eval_checked(slope, vars, p.a, p.b);
        if (!r || !std::isfinite(*r)) return std::nullopt;
        double n = std::hypot(1.0, *r);
        return Dir{1.0 / n, *r / n};
    };

    std::vector<Curve> curves(seeds.size());
    par::for_each_index(
        seeds.size(),
        [&](std::size_t i) {
            curves[i] =
                trace_one(t, seeds[i], h, invariant, vertical ? nullptr : &slope, vars);
        },
        cfg.mode);
    return curves;
}

std::vector<Curve> trace_field_lines(const FirstOrderOp& op, const VarPair& vars,
                                     const std::vector<SamplePoint>& seeds,
                                     const SampleRegion& region, double h,
                                     const std::optional<Expr>& invariant,
                                     const OracleConfig& cfg) {
    Expr alpha = simplify(op.alpha);
    Expr beta = simplify(op.beta);
    Tracer t = make_tracer(region);
    t.align = false;  // the field itself orients the curve
    t.field = [&alpha, &beta, &vars](const SamplePoint& p) -> std::optional<Dir> {
        auto a = eval_checked(alpha, vars, p.a, p.b);
        auto b = eval_checked(beta, vars, p.a, p.b);
        if (!a || !b || !std::isfinite(*a) || !std::isfinite(*b)) return std::nullopt;
        double n = std::hypot(*a, *b);
        if (n < 1e-300) return std::nullopt;  // equilibrium point: no direction
        return Dir{*a / n, *b / n};
    };

    std::vector<Curve> curves(seeds.size());
    par::for_each_index(
        seeds.size(),
        [&](std::size_t i) { curves[i] = trace_one(t, seeds[i], h, invariant, nullptr, vars); },
        cfg.mode);
    return curves;
}

}  // namespace characteristica
