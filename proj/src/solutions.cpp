#include "characteristica/solutions.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "characteristica/antiderivative.hpp"

namespace characteristica {

namespace {

bool is_one_literal(const Expr& e) {
    return e->kind == NodeKind::Number && e->value == Rational(1);
}

std::string render_piece(const Expr& coeff, char slot, const Expr& arg) {
    std::string call = std::string(1, slot) + "(" + pretty_text(arg) + ")";
    if (is_one_literal(coeff)) return call;
    return pretty_text(coeff) + "*" + call;
}

}  // namespace

std::string GeneralSolution::text() const {
    std::string out;
    if (base) out = pretty_text(*base);
    for (const SolutionTerm& t : terms) {
        if (!out.empty()) out += " + ";
        out += render_piece(t.coeff, t.slot, t.arg);
    }
    return out;
}

Expr probe_apply(ProbeFn fn, const Expr& arg) {
    switch (fn) {
        case ProbeFn::Sin: return call(Builtin::Sin, arg);
        case ProbeFn::Cos: return call(Builtin::Cos, arg);
        case ProbeFn::Exp: return call(Builtin::Exp, arg);
        case ProbeFn::Square: return powr(arg, Rational(2));
        case ProbeFn::Cube: return powr(arg, Rational(3));
        case ProbeFn::Id: return arg;
    }
    throw EngineError("unknown probe function");
}

Expr instantiate(const GeneralSolution& sol, ProbeFn f, ProbeFn g) {
    Expr u = sol.base ? *sol.base : number(0);
    for (const SolutionTerm& t : sol.terms) {
        Expr piece = probe_apply(t.slot == 'F' ? f : g, t.arg);
        u = add(u, mul(t.coeff, piece));
    }
    return simplify(u);
}

GeneralSolution pull_back(const GeneralSolution& sol, const TransitionMap& map) {
    VarPair tv = target_vars();
    auto down = [&](const Expr& e) {
        return simplify(substitute_pair(e, tv.first, map.phi, tv.second, map.psi));
    };
    GeneralSolution out;
    out.rule = sol.rule;
    out.coords = map.vars;
    if (sol.base) out.base = down(*sol.base);
    for (const SolutionTerm& t : sol.terms) out.terms.push_back({down(t.coeff), t.slot, down(t.arg)});
    return out;
}

namespace {

// Smallest axis-aligned rectangle around the image of the region under the
// map, from the same deterministic samples the oracles draw. Bounds snap to
// a fine dyadic grid so they stay exact rationals.
std::optional<SampleRegion> image_region(const TransitionMap& map, const SampleRegion& region,
                                         const OracleConfig& cfg) {
    std::vector<DomainGuard> extra = collect_guards(map.phi);
    for (DomainGuard& g : collect_guards(map.psi)) extra.push_back(g);
    std::vector<SamplePoint> pts = draw_samples(map.vars, region, cfg, extra);
    double lo1 = 0, hi1 = 0, lo2 = 0, hi2 = 0;
    int seen = 0;
    for (const SamplePoint& p : pts) {
        auto f = eval_checked(map.phi, map.vars, p.a, p.b);
        auto s = eval_checked(map.psi, map.vars, p.a, p.b);
        if (!f || !s || !std::isfinite(*f) || !std::isfinite(*s)) continue;
        if (seen == 0) {
            lo1 = hi1 = *f;
            lo2 = hi2 = *s;
        } else {
            lo1 = std::min(lo1, *f);
            hi1 = std::max(hi1, *f);
            lo2 = std::min(lo2, *s);
            hi2 = std::max(hi2, *s);
        }
        ++seen;
    }
    if (seen < 8) return std::nullopt;
    auto snap = [](double v) -> std::optional<Rational> {
        double scaled = v * 1048576.0;
        if (!std::isfinite(scaled) || std::fabs(scaled) > 9e15) return std::nullopt;
        return Rational(static_cast<std::int64_t>(std::llround(scaled)), 1048576);
    };
    auto a1 = snap(lo1), b1 = snap(hi1), a2 = snap(lo2), b2 = snap(hi2);
    if (!a1 || !b1 || !a2 || !b2) return std::nullopt;
    SampleRegion out{*a1, *b1, *a2, *b2, {}};
    Rational pad(1, 1024);
    if (out.hi1 - out.lo1 < pad) {
        out.lo1 = out.lo1 - pad;
        out.hi1 = out.hi1 + pad;
    }
    if (out.hi2 - out.lo2 < pad) {
        out.lo2 = out.lo2 - pad;
        out.hi2 = out.hi2 + pad;
    }
    return out;
}

GeneralSolution two_slots(std::string rule, Expr coeff_f, Expr arg_f, Expr arg_g) {
    GeneralSolution sol;
    sol.rule = std::move(rule);
    sol.coords = target_vars();
    sol.terms.push_back({std::move(coeff_f), 'F', std::move(arg_f)});
    sol.terms.push_back({number(1), 'G', std::move(arg_g)});
    return sol;
}

}  // namespace

std::optional<GeneralSolution> solve_canonical(const CanonicalForm& form,
                                               const TransitionMap& map,
                                               const SampleRegion& region,
                                               const OracleConfig& cfg) {
    const CanonicalSlots& s = form.source;
    const VarPair& vars = map.vars;
    auto z = [&](const Expr& e) { return equiv_zero(simplify(e), vars, region, cfg); };
    Expr xi = symbol(target_vars().first);
    Expr eta = symbol(target_vars().second);

    if (form.kind == PdeClass::Hyperbolic) {
        if (!z(s.uxixi) || !z(s.uetaeta) || !z(s.u)) return std::nullopt;
        bool homogeneous = z(s.rhs);
        if (!homogeneous || !z(s.ueta)) return std::nullopt;
        if (z(s.uxi)) return two_slots("U_12 = 0", number(1), xi, eta);
        if (z(add(s.uxi, s.uxieta)))
            return two_slots("U_12 = U_1", call(Builtin::Exp, eta), xi, eta);
        // 2*eta*U_12 + U_1 = 0 when lead == 2*eta * first-order slot
        if (z(sub(s.uxieta, mul(number(2), mul(map.psi, s.uxi)))))
            return two_slots("2*eta*U_12 + U_1 = 0", powr(eta, Rational(-1, 2)), xi, eta);
        return std::nullopt;
    }

    if (form.kind != PdeClass::Parabolic) return std::nullopt;
    if (!z(s.uxixi) || !z(s.uxieta) || !z(s.u) || !z(s.uxi)) return std::nullopt;
    bool homogeneous = z(s.rhs);
    if (homogeneous) {
        if (z(s.ueta)) return two_slots("U_22 = 0", eta, xi, xi);
        if (z(add(s.uetaeta, mul(map.psi, s.ueta))))
            return two_slots("eta*U_22 = U_2", powr(eta, Rational(2)), xi, xi);
        return std::nullopt;
    }

    // U_22 = r(eta): forcing divided by the lead must be a function of eta
    // alone; the particular part is its double antiderivative.
    if (!z(s.ueta) || !map.has_inverse()) return std::nullopt;
    if (!certify_nonvanishing(s.uetaeta, vars, region, cfg)) return std::nullopt;
    Expr forcing = simplify(div(s.rhs, s.uetaeta));
    Expr along = simplify(sub(mul(diff(forcing, vars.first), diff(map.psi, vars.second)),
                              mul(diff(forcing, vars.second), diff(map.psi, vars.first))));
    if (!z(along)) return std::nullopt;
    Expr r_eta = simplify(map.to_target(forcing));
    if (!z(map.to_source(diff(r_eta, target_vars().first)))) return std::nullopt;
    std::optional<SampleRegion> treg = image_region(map, region, cfg);
    if (!treg) return std::nullopt;
    std::optional<Expr> once = antiderivative(r_eta, target_vars().second, target_vars(), treg, cfg);
    if (!once) return std::nullopt;
    std::optional<Expr> twice =
        antiderivative(*once, target_vars().second, target_vars(), treg, cfg);
    if (!twice) return std::nullopt;
    GeneralSolution sol = two_slots("U_22 = r(eta)", eta, xi, xi);
    sol.base = simplify(*twice);
    return sol;
}

std::optional<GeneralSolution> dalembert(const Pde2& p, const SampleRegion& region,
                                         const OracleConfig& cfg) {
    auto numeric = [](const Expr& e) { return simplify(e)->kind == NodeKind::Number; };
    auto vanishes = [](const Expr& e) { return is_zero_literal(simplify(e)); };
    if (!numeric(p.a) || !numeric(p.b) || !numeric(p.c)) return std::nullopt;
    if (!vanishes(p.d) || !vanishes(p.e) || !vanishes(p.g) || !vanishes(p.f)) return std::nullopt;

    Classification cl = classify(p, region, cfg);
    if (cl.kind != PdeClass::Hyperbolic) return std::nullopt;
    LambdaPair lam = lambdas(p, cl.kind, region, cfg);

    Expr v1 = symbol(p.vars.first);
    Expr v2 = symbol(p.vars.second);
    auto travel = [&](const std::optional<Expr>& slope) {
        // an absent slope marks the plain-D2 factor, whose invariant is v1
        return slope ? simplify(add(v2, mul(*slope, v1))) : v1;
    };
    GeneralSolution sol;
    sol.rule = "travelling-wave";
    sol.coords = p.vars;
    sol.terms.push_back({number(1), 'F', travel(lam.plus)});
    sol.terms.push_back({number(1), 'G', travel(lam.minus)});

    ResidualReport check = residual(p, instantiate(sol, ProbeFn::Sin, ProbeFn::Cos), region, cfg);
    if (!check.symbolic_ok) return std::nullopt;
    return sol;
}

ResidualReport residual(const Pde2& p, const Expr& u, const SampleRegion& region,
                        const OracleConfig& cfg, double fd_h, double fd_tol_abs,
                        double fd_tol_rel) {
    const VarPair& vars = p.vars;
    Expr u1 = diff(u, vars.first);
    Expr u2 = diff(u, vars.second);
    Expr r_sym = simplify(sub(
        add(add(add(mul(p.a, diff(u1, vars.first)),
                    mul(mul(number(2), p.b), diff(u1, vars.second))),
                add(mul(p.c, diff(u2, vars.second)), mul(p.d, u1))),
            add(mul(p.e, u2), mul(p.g, u))),
        p.f));

    ResidualReport rep;
    rep.symbolic = equiv_zero_report(r_sym, vars, region, cfg);
    rep.symbolic_ok = rep.symbolic.equal;

    std::vector<DomainGuard> extra = collect_guards(r_sym);
    for (DomainGuard& g : collect_guards(u)) extra.push_back(g);
    std::vector<SamplePoint> pts = draw_samples(vars, region, cfg, extra);
    std::size_t n = pts.size();
    std::vector<double> violation(n), magnitude(n);

    const Expr coeffs[7] = {p.a, p.b, p.c, p.d, p.e, p.g, p.f};
    par::for_each_index(
        n,
        [&](std::size_t i) {
            const SamplePoint& at = pts[i];
            double cv[7];
            for (int k = 0; k < 7; ++k) {
                auto v = eval_checked(coeffs[k], vars, at.a, at.b);
                if (!v || !std::isfinite(*v)) {
                    violation[i] = std::numeric_limits<double>::quiet_NaN();
                    return;
                }
                cv[k] = *v;
            }
            // 9-point stencil of u values; [di+1][dj+1] for di,dj in {-1,0,1}
            double st[3][3];
            for (int di = -1; di <= 1; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    auto v = eval_checked(u, vars, at.a + di * fd_h, at.b + dj * fd_h);
                    if (!v || !std::isfinite(*v)) {
                        violation[i] = std::numeric_limits<double>::quiet_NaN();
                        return;
                    }
                    st[di + 1][dj + 1] = *v;
                }
            double h2 = fd_h * fd_h;
            double u11 = (st[2][1] - 2 * st[1][1] + st[0][1]) / h2;
            double u22 = (st[1][2] - 2 * st[1][1] + st[1][0]) / h2;
            double u12 = (st[2][2] - st[2][0] - st[0][2] + st[0][0]) / (4 * h2);
            double d1 = (st[2][1] - st[0][1]) / (2 * fd_h);
            double d2 = (st[1][2] - st[1][0]) / (2 * fd_h);
            double term[7] = {cv[0] * u11,      2 * cv[1] * u12, cv[2] * u22, cv[3] * d1,
                              cv[4] * d2,       cv[5] * st[1][1], cv[6]};
            double r = term[0] + term[1] + term[2] + term[3] + term[4] + term[5] - term[6];
            double scale = 0;
            for (double t : term) scale = std::max(scale, std::fabs(t));
            magnitude[i] = std::fabs(r);
            violation[i] = std::fabs(r) / (fd_tol_abs + fd_tol_rel * scale);
        },
        cfg.mode);

    rep.fd_samples = static_cast<int>(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isnan(violation[i])) {
            ++rep.fd_excluded;
            continue;
        }
        rep.fd_max_violation = std::max(rep.fd_max_violation, violation[i]);
        rep.fd_max_abs = std::max(rep.fd_max_abs, magnitude[i]);
    }
    int surviving = rep.fd_samples - rep.fd_excluded;
    rep.fd_ok = rep.fd_samples > 0 && surviving * 2 >= rep.fd_samples &&
                rep.fd_max_violation <= 1.0;
    return rep;
}

}  // namespace characteristica
