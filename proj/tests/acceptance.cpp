// Acceptance gate: seven pinned checks over the shipped corpus, one verdict
// line each, exit 0 only when every one holds.  Tolerances and expected
// values are written out inline so a regression anywhere in the pipeline
// trips exactly the line that owns it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "characteristica/canonical.hpp"
#include "characteristica/chars.hpp"
#include "characteristica/corpus.hpp"
#include "characteristica/expr.hpp"
#include "characteristica/factor.hpp"
#include "characteristica/oracle.hpp"
#include "characteristica/pde.hpp"
#include "characteristica/plot.hpp"
#include "characteristica/solutions.hpp"

using namespace characteristica;

namespace {

// Shared fixture artifacts: every criterion reads the same corpus and the
// same engine outputs, computed once under the default oracle settings
// (64 samples, 1e-9 absolute and relative tolerance, fixed seed).
struct Gate {
    OracleConfig cfg;
    std::vector<Fixture> all;
    std::map<std::string, FixtureOutcome> ran;

    const FixtureOutcome& outcome(const std::string& id) {
        auto it = ran.find(id);
        if (it == ran.end()) it = ran.emplace(id, run_fixture(find_fixture(all, id), cfg)).first;
        return it->second;
    }
    const Fixture& fixture(const std::string& id) { return find_fixture(all, id); }
};

struct Verdict {
    bool pass = true;
    std::ostringstream note;

    void fail(const std::string& why) {
        pass = false;
        if (!note.str().empty()) note << "; ";
        note << why;
    }
    void check(bool ok, const std::string& why) {
        if (!ok) fail(why);
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. Every fixture classifies to its recorded type and the engine's
//    characteristic slopes match the recorded closed forms, all inside the
//    wall-clock budget.

Verdict classification_and_slopes(Gate& g) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();

    if (g.all.size() < 12) v.fail("corpus holds fewer than 12 fixtures");
    double worst = 0.0;
    for (const Fixture& fx : g.all) {
        Pde2 p = parse_pde(fx.pde, fx.vars);
        Classification cl = classify(p, fx.region, g.cfg);
        if (pde_class_name(cl.kind) != fx.expect_class) {
            v.fail(fx.id + ": classified " + pde_class_name(cl.kind) + ", recorded " +
                   fx.expect_class);
            continue;
        }
        if (cl.kind != PdeClass::Hyperbolic && cl.kind != PdeClass::Parabolic) continue;

        LambdaPair lam = lambdas(p, cl.kind, fx.region, g.cfg);
        auto slope = [&](const std::optional<Expr>& got, const std::optional<std::string>& want,
                         const char* name) {
            if (!want) return;
            if (!got) {
                v.fail(fx.id + ": " + name + " missing");
                return;
            }
            Expr gap = simplify(sub(*got, parse_expr(*want, fx.vars)));
            EquivReport rep = equiv_zero_report(gap, fx.vars, fx.region, g.cfg);
            worst = std::max(worst, rep.max_violation);
            if (!rep.equal)
                v.fail(fx.id + ": " + name + " off by ratio " + num(rep.max_violation));
        };
        slope(lam.plus, fx.lambda_plus ? fx.lambda_plus : fx.lambda_repeated, "lambda+");
        slope(lam.minus, fx.lambda_minus, "lambda-");
    }

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 5.0) v.fail("took " + num(secs) + " s, budget 5 s");
    if (v.pass)
        v.note << g.all.size() << " fixtures, classes exact, worst slope ratio " << num(worst)
               << " of tol 1e-9 at 64 samples, " << num(secs) << " s < 5 s";
    return v;
}

// ---------------------------------------------------------------------------
// 2. The reduced forms land on the recorded canonical equations: every
//    computed method must match the pinned slot texts, cross-multiplied
//    against the leading slot, at tolerance 1e-8.

Verdict canonical_targets(Gate& g) {
    Verdict v;
    const std::vector<std::pair<const char*, std::map<std::string, std::string>>> pinned = {
        {"hyp-es1", {{"uxieta", "1"}, {"uxi", "-1"}}},
        {"hyp-es3", {{"uxieta", "1"}}},
        {"hyp-es5", {{"uxieta", "4*(xi - eta)"}, {"uxi", "1"}, {"ueta", "3"}}},
        {"inv-es2", {{"uxieta", "2*eta"}, {"uxi", "1"}}},
        {"par-es2", {{"uetaeta", "1"}, {"rhs", "6*eta"}}},
        {"par-es3", {{"uetaeta", "1"}, {"ueta", "-1/eta"}}},
        {"final", {{"uxieta", "eta^2 + 4*xi"}, {"uxi", "eta"}}},
    };
    OracleConfig tight = g.cfg;
    tight.tol_abs = 1e-8;
    tight.tol_rel = 1e-8;

    int forms_checked = 0;
    for (const auto& [id, slots] : pinned) {
        const Fixture& fx = g.fixture(id);
        const FixtureOutcome& out = g.outcome(id);
        if (out.forms.size() < 2) {
            v.fail(std::string(id) + ": only " + std::to_string(out.forms.size()) + " form(s)");
            continue;
        }
        for (const CanonicalForm& form : out.forms) {
            ++forms_checked;
            if (!canonical_matches(form, out.map, slots, fx.region, tight))
                v.fail(std::string(id) + "/" + form.method + ": slots off the pinned form");
        }
    }
    if (v.pass)
        v.note << pinned.size() << " pinned equations, " << forms_checked
               << " reduced forms matched at slot tol 1e-8";
    return v;
}

// ---------------------------------------------------------------------------
// 3. The independent reduction methods agree on every fixture, and the
//    agreement check actually has teeth: a 1e-3 relative bump on a single
//    slot must break it.

Verdict methods_agree(Gate& g) {
    Verdict v;
    int forms_total = 0;
    for (const Fixture& fx : g.all) {
        const FixtureOutcome& out = g.outcome(fx.id);
        if (out.forms.size() < 2) {
            v.fail(fx.id + ": fewer than two reduction methods produced forms");
            continue;
        }
        forms_total += static_cast<int>(out.forms.size());
        if (!out.cross_validated) v.fail(fx.id + ": methods disagree");
        if (fx.inverse && !out.pair.degenerate && out.forms.size() < 3)
            v.fail(fx.id + ": inverse supplied but no third method ran");
    }

    // Tamper probes: one first-order slot, one second-order slot.
    const Expr bump = div(number(1001), number(1000));
    {
        const Fixture& fx = g.fixture("hyp-es5");
        std::vector<CanonicalForm> forms = g.outcome("hyp-es5").forms;
        forms[1].source.uxi = simplify(mul(forms[1].source.uxi, bump));
        if (cross_validate(forms, fx.vars, fx.region, g.cfg))
            v.fail("hyp-es5: 1e-3 bump on a first-order slot went unnoticed");
    }
    {
        const Fixture& fx = g.fixture("final");
        std::vector<CanonicalForm> forms = g.outcome("final").forms;
        forms[0].source.uxieta = simplify(mul(forms[0].source.uxieta, bump));
        if (cross_validate(forms, fx.vars, fx.region, g.cfg))
            v.fail("final: 1e-3 bump on the mixed slot went unnoticed");
    }
    if (v.pass)
        v.note << forms_total << " forms across " << g.all.size()
               << " fixtures cross-validated at tol 1e-9, both 1e-3 tamper probes rejected";
    return v;
}

// ---------------------------------------------------------------------------
// 4. The factor-condition verdicts: commutativity, residues, the parabolic
//    perfect-square test, and the inverse-map twins all land on the pinned
//    booleans and values.

Verdict factor_conditions(Gate& g) {
    Verdict v;

    {  // equal nonzero residues, commuting factors
        const Fixture& fx = g.fixture("hyp-es3");
        const FixtureOutcome& out = g.outcome("hyp-es3");
        const CommutatorReport& cr = *out.commutator;
        v.check(cr.commutes, "hyp-es3: factors should commute");
        v.check(oracle_equal(cr.r_minus, cr.r_plus, fx.vars, fx.region, g.cfg),
                "hyp-es3: residues should agree");
        v.check(!equiv_zero(cr.r_minus, fx.vars, fx.region, g.cfg),
                "hyp-es3: residues should not vanish");
    }
    {  // distinct constant residues, non-commuting factors
        const Fixture& fx = g.fixture("hyp-es5");
        const CommutatorReport& cr = *g.outcome("hyp-es5").commutator;
        v.check(!cr.commutes, "hyp-es5: factors should not commute");
        v.check(oracle_equal(cr.r_minus, parse_expr("-1", fx.vars), fx.vars, fx.region, g.cfg),
                "hyp-es5: r- should equal -1");
        v.check(oracle_equal(cr.r_plus, parse_expr("-3", fx.vars), fx.vars, fx.region, g.cfg),
                "hyp-es5: r+ should equal -3");
    }
    {  // one-sided vanishing residue
        const Fixture& fx = g.fixture("inv-es2");
        const CommutatorReport& cr = *g.outcome("inv-es2").commutator;
        v.check(cr.residue_free_plus && !cr.residue_free_minus,
                "inv-es2: only the plus residue should vanish");
        v.check(equiv_zero(cr.r_plus, fx.vars, fx.region, g.cfg), "inv-es2: r+ should be zero");
        v.check(!cr.commutes, "inv-es2: factors should not commute");
    }
    // Parabolic perfect squares against genuinely non-commuting squares.
    const std::vector<std::pair<const char*, bool>> squares = {
        {"par-es1", true}, {"par-family", true}, {"par-es2", false}, {"par-es3", false}};
    for (const auto& [id, want_zero] : squares) {
        const Fixture& fx = g.fixture(id);
        const FixtureOutcome& out = g.outcome(id);
        Expr residue = parabolic_lambda_residue(out.pair.plus, fx.vars);
        bool is_zero = equiv_zero(residue, fx.vars, fx.region, g.cfg);
        v.check(is_zero == want_zero, std::string(id) + ": operator-square residue should " +
                                          (want_zero ? "vanish" : "not vanish"));
    }
    v.check(oracle_equal(parabolic_lambda_residue(g.outcome("par-es2").pair.plus,
                                                  g.fixture("par-es2").vars),
                         parse_expr("1", g.fixture("par-es2").vars), g.fixture("par-es2").vars,
                         g.fixture("par-es2").region, g.cfg),
            "par-es2: operator-square residue should equal 1");

    // The inverse-map twins must reproduce the direct verdicts wherever an
    // inverse pair is on file.
    int twins = 0;
    for (const Fixture& fx : g.all) {
        if (!fx.inverse) continue;
        const FixtureOutcome& out = g.outcome(fx.id);
        if (!out.inverse_conditions) {
            v.fail(fx.id + ": inverse on file but no twin report");
            continue;
        }
        const InverseConditionReport& ic = *out.inverse_conditions;
        ++twins;
        if (ic.kind == PdeClass::Hyperbolic) {
            const CommutatorReport& cr = *out.commutator;
            v.check(ic.commutes && *ic.commutes == cr.commutes,
                    fx.id + ": twin commutation verdict disagrees");
            v.check(ic.residue_free &&
                        *ic.residue_free == (cr.residue_free_minus && cr.residue_free_plus),
                    fx.id + ": twin residue-free verdict disagrees");
            v.check(ic.residue_minus_twin &&
                        ic.residue_minus_twin->zero == cr.residue_free_minus,
                    fx.id + ": minus-side twin disagrees");
            v.check(ic.residue_plus_twin && ic.residue_plus_twin->zero == cr.residue_free_plus,
                    fx.id + ": plus-side twin disagrees");
        } else {
            v.check(ic.parabolic_identity && ic.parabolic_identity->zero,
                    fx.id + ": parabolic inverse identity should hold");
            if (fx.conditions.lambda_residue_zero)
                v.check(ic.residue_free &&
                            *ic.residue_free == *fx.conditions.lambda_residue_zero,
                        fx.id + ": twin residue-free verdict disagrees with the square test");
        }
    }
    if (twins == 0) v.fail("no fixture carries an inverse pair");
    if (v.pass)
        v.note << "pinned commutator/residue/square verdicts exact, " << twins
               << " inverse twin reports consistent with the direct ones";
    return v;
}

// ---------------------------------------------------------------------------
// 5. Every closed-form template the catalog emits is certified: the recorded
//    rule fires, and the pulled-back solution passes the dual residual check
//    under both probe instantiations, as do the recorded particular
//    solutions and the travelling-wave construction.

Verdict solution_templates(Gate& g) {
    Verdict v;
    const std::vector<std::pair<const char*, const char*>> rules = {
        {"hyp-es1", "U_12 = U_1"},         {"hyp-es2", "U_12 = U_1"},
        {"hyp-es3", "U_12 = 0"},           {"hyp-es4", "U_12 = 0"},
        {"inv-es1", "U_12 = 0"},           {"inv-es2", "2*eta*U_12 + U_1 = 0"},
        {"par-es1", "U_22 = 0"},           {"par-es2", "U_22 = r(eta)"},
        {"par-es3", "eta*U_22 = U_2"},     {"par-family", "U_22 = 0"},
    };
    const std::pair<ProbeFn, ProbeFn> probes[] = {{ProbeFn::Sin, ProbeFn::Cos},
                                                  {ProbeFn::Exp, ProbeFn::Square}};
    double worst_sym = 0.0, worst_fd = 0.0;
    int certified = 0;

    for (const auto& [id, rule] : rules) {
        const Fixture& fx = g.fixture(id);
        const FixtureOutcome& out = g.outcome(id);
        if (!out.solution) {
            v.fail(std::string(id) + ": no template fired");
            continue;
        }
        if (out.solution->rule != rule)
            v.fail(std::string(id) + ": rule '" + out.solution->rule + "', pinned '" + rule +
                   "'");
        GeneralSolution pulled = pull_back(*out.solution, out.map);
        for (const auto& [f, gfn] : probes) {
            Expr u = instantiate(pulled, f, gfn);
            ResidualReport rr = residual(out.pde, u, fx.region, g.cfg);
            worst_sym = std::max(worst_sym, rr.symbolic.max_violation);
            worst_fd = std::max(worst_fd, rr.fd_max_violation);
            if (!rr.ok())
                v.fail(std::string(id) + ": probe residual off (symbolic " +
                       num(rr.symbolic.max_violation) + ", fd " + num(rr.fd_max_violation) +
                       ")");
            else
                ++certified;
        }
    }

    // Recorded particular solutions ride the same dual judge.
    for (const Fixture& fx : g.all)
        for (const std::string& text : fx.solution.particular) {
            const FixtureOutcome& out = g.outcome(fx.id);
            ResidualReport rr =
                residual(out.pde, parse_expr(text, fx.vars), fx.region, g.cfg);
            worst_sym = std::max(worst_sym, rr.symbolic.max_violation);
            worst_fd = std::max(worst_fd, rr.fd_max_violation);
            if (!rr.ok())
                v.fail(fx.id + ": particular solution " + text + " fails its residual");
            else
                ++certified;
        }

    // Travelling-wave templates: the monic constant-coefficient equation and
    // the degenerate one with a bare second-variable factor.
    for (const char* text : {"u_xx - u_yy = 0", "u_xy + u_yy = 0"}) {
        VarPair xy{"x", "y"};
        SampleRegion box{Rational(0), Rational(1), Rational(0), Rational(1), {}};
        Pde2 p = parse_pde(text, xy);
        std::optional<GeneralSolution> sol = dalembert(p, box, g.cfg);
        if (!sol) {
            v.fail(std::string("no travelling-wave template for ") + text);
            continue;
        }
        for (const auto& [f, gfn] : probes) {
            ResidualReport rr = residual(p, instantiate(*sol, f, gfn), box, g.cfg);
            worst_sym = std::max(worst_sym, rr.symbolic.max_violation);
            worst_fd = std::max(worst_fd, rr.fd_max_violation);
            if (!rr.ok())
                v.fail(std::string(text) + ": travelling-wave probe fails its residual");
            else
                ++certified;
        }
    }
    if (v.pass)
        v.note << certified << " probe residuals certified, worst symbolic ratio "
               << num(worst_sym) << " (tol 1e-9), worst fd ratio " << num(worst_fd)
               << " (tol 1e-6), 64 samples";
    return v;
}

// ---------------------------------------------------------------------------
// 6. The operator-identity battery: factorization, commutators, the
//    quadratic the slopes satisfy, invariant collapse, chain-rule
//    annihilation, and map round-trips, across every fixture and probe.

Verdict identity_battery(Gate& g) {
    Verdict v;
    int held = 0, failed = 0;
    std::string first;

    auto tally = [&](bool ok, const std::string& label) {
        if (ok) {
            ++held;
        } else {
            ++failed;
            if (first.empty()) first = label;
        }
    };

    for (const Fixture& fx : g.all) {
        const FixtureOutcome& out = g.outcome(fx.id);
        const VarPair& vars = fx.vars;
        const SampleRegion& reg = fx.region;
        const Pde2& p = out.pde;
        const FactorPair& pr = out.pair;
        auto zero = [&](const Expr& e) { return equiv_zero(simplify(e), vars, reg, g.cfg); };

        // The root that entered the slope formulas squares back to the
        // discriminant; the degenerate branch takes no root at all.
        if (!out.lam.degenerate)
            tally(zero(sub(mul(out.lam.root.root, out.lam.root.root), discriminant(p))),
                  fx.id + ": root^2 != discriminant");

        // Monic slopes satisfy the characteristic quadratic's sum/product.
        if (out.lam.plus && out.lam.minus) {
            tally(zero(add(mul(p.a, add(*out.lam.plus, *out.lam.minus)), mul(number(2), p.b))),
                  fx.id + ": slope sum breaks the quadratic");
            tally(zero(sub(mul(p.a, mul(*out.lam.plus, *out.lam.minus)), p.c)),
                  fx.id + ": slope product breaks the quadratic");
        }

        for (const Expr& w : probe_family(vars)) {
            Expr w2 = diff(w, vars.second);
            Expr mp = apply_op(pr.minus, apply_op(pr.plus, w, vars), vars);
            Expr pm = apply_op(pr.plus, apply_op(pr.minus, w, vars), vars);

            // Both factored compositions reproduce the principal part.
            tally(zero(sub(principal_apply(p, w),
                           mul(pr.leading, add(mp, mul(pr.residue_minus, w2))))),
                  fx.id + ": minus-plus composition misses the principal part");
            tally(zero(sub(principal_apply(p, w),
                           mul(pr.leading, add(pm, mul(pr.residue_plus, w2))))),
                  fx.id + ": plus-minus composition misses the principal part");

            // The commutator collapses to a first-order term.
            tally(zero(sub(sub(mp, pm), mul(sub(pr.residue_plus, pr.residue_minus), w2))),
                  fx.id + ": commutator is not the residue gap times D2");

            // The characteristic form matches the product of the factors.
            Expr lw = apply_op(pr.plus, w, vars);
            Expr prod = pr.kind == PdeClass::Hyperbolic ? mul(lw, apply_op(pr.minus, w, vars))
                                                        : mul(lw, lw);
            tally(zero(sub(char_form(p, w), mul(pr.leading, prod))),
                  fx.id + ": characteristic form is not the factor product");
        }

        // The map's invariants collapse the principal part to the
        // residue-carried first-order term.
        tally(zero(sub(principal_apply(p, out.map.phi),
                       mul(pr.leading, mul(pr.residue_minus, diff(out.map.phi, vars.second))))),
              fx.id + ": principal part does not collapse on phi");
        if (out.classification.kind == PdeClass::Hyperbolic)
            tally(zero(sub(principal_apply(p, out.map.psi),
                           mul(pr.leading,
                               mul(pr.residue_plus, diff(out.map.psi, vars.second))))),
                  fx.id + ": principal part does not collapse on psi");

        // Chain-rule reduction annihilates the off-form second-order slots.
        for (const CanonicalForm& form : out.forms) {
            if (form.method != "chain-rule") continue;
            tally(zero(form.source.uxixi), fx.id + ": chain rule leaves a U_11 term");
            if (form.kind == PdeClass::Hyperbolic)
                tally(zero(form.source.uetaeta), fx.id + ": chain rule leaves a U_22 term");
            else
                tally(zero(form.source.uxieta), fx.id + ": chain rule leaves a U_12 term");
        }

        // Parabolic second-order slots equal the characteristic form of psi.
        if (out.classification.kind == PdeClass::Parabolic)
            for (const CanonicalForm& form : out.forms)
                tally(zero(sub(form.source.uetaeta, char_form(p, out.map.psi))),
                      fx.id + ": U_22 slot is not the characteristic form of psi");

        // Inverse pairs: jacobian reciprocity and coordinate round trips.
        if (out.map.has_inverse()) {
            VarPair tv = target_vars();
            Expr inv_j = sub(mul(diff(*out.map.inv_phi, tv.first),
                                 diff(*out.map.inv_psi, tv.second)),
                             mul(diff(*out.map.inv_phi, tv.second),
                                 diff(*out.map.inv_psi, tv.first)));
            tally(zero(sub(mul(out.map.jacobian(), out.map.to_source(inv_j)), number(1))),
                  fx.id + ": jacobians are not reciprocal");
            tally(zero(sub(out.map.to_source(out.map.to_target(symbol(vars.first))),
                           symbol(vars.first))),
                  fx.id + ": first coordinate does not round-trip");
            tally(zero(sub(out.map.to_source(out.map.to_target(symbol(vars.second))),
                           symbol(vars.second))),
                  fx.id + ": second coordinate does not round-trip");
        }
    }

    // Constant-coefficient cross slot equals the closed discriminant formula.
    {
        VarPair xy{"x", "y"};
        SampleRegion box{Rational(0), Rational(1), Rational(0), Rational(1), {}};
        Pde2 p = parse_pde("u_xx - u_yy = 0", xy);
        Classification cl = classify(p, box, g.cfg);
        FactorPair pr = factor_principal(p, lambdas(p, cl.kind, box, g.cfg), cl.kind);
        std::vector<CharacteristicOde> odes = char_odes(pr, xy);
        std::optional<Invariant> phi = solve_invariant(odes[0], xy, box, g.cfg);
        std::optional<Invariant> psi = solve_invariant(odes[1], xy, box, g.cfg);
        if (phi && psi) {
            TransitionMap map = build_map(p, pr, *phi, *psi, std::nullopt, box, g.cfg);
            CanonicalForm form = reduce_compact(p, pr, map, box, g.cfg);
            Expr formula = simplify(mul(div(mul(number(-4), discriminant(p)), p.a),
                                        mul(diff(map.phi, xy.second), diff(map.psi, xy.second))));
            tally(oracle_equal(form.source.uxieta, formula, xy, box, g.cfg),
                  "wave: U_12 slot is not -(4 delta / a) phi_2 psi_2");
        } else {
            tally(false, "wave: invariants did not solve");
        }
    }

    if (failed > 0) v.fail(std::to_string(failed) + " of the battery failed, first: " + first);
    if (v.pass) v.note << held << " operator identities hold, 0 failures";
    return v;
}

// ---------------------------------------------------------------------------
// 7. Numerics agree with the symbols: traced characteristic curves conserve
//    their invariants, and every derivative the engine takes matches a
//    central difference.

Verdict numeric_agreement(Gate& g) {
    Verdict v;

    {  // circular characteristics close up and conserve x^2 + y^2
        VarPair xy{"x", "y"};
        SampleRegion box{Rational(-2), Rational(2), Rational(-2), Rational(2), {}};
        CharacteristicOde circle{CharFamily::Plus, parse_expr("-x/y", xy), false};
        std::vector<Curve> curves =
            trace_curves(circle, xy, {SamplePoint{0.6, 0.8}}, box, 1e-3,
                         parse_expr("x^2 + y^2", xy), g.cfg);
        if (curves.size() != 1) {
            v.fail("circle: expected one curve");
        } else {
            const Curve& c = curves[0];
            v.check(c.closed, "circle: orbit did not close");
            v.check(!c.truncated, "circle: trace stopped on a fault");
            v.check(c.invariant_at_seed && std::abs(*c.invariant_at_seed - 1.0) <= 1e-9,
                    "circle: seed invariant is not 1");
            v.check(c.invariant_drift <= 1e-6,
                    "circle: drift " + num(c.invariant_drift) + " > 1e-6 at h=1e-3");
            if (v.pass) v.note << "circle closed with drift " << num(c.invariant_drift);
        }
    }

    {  // parabolic characteristic arcs of the pinned hyperbolic fixture
        const Fixture& fx = g.fixture("hyp-es5");
        const FixtureOutcome& out = g.outcome("hyp-es5");
        std::vector<CharacteristicOde> odes = char_odes(out.pair, fx.vars);
        double worst = 0.0;
        int traced = 0;
        for (const CharacteristicOde& ode : odes) {
            std::optional<Invariant> inv = solve_invariant(ode, fx.vars, fx.region, g.cfg);
            if (!inv) {
                v.fail("hyp-es5: characteristic invariant did not solve");
                continue;
            }
            for (const Curve& c : trace_curves(ode, fx.vars, seed_grid(fx.region, 2), fx.region,
                                               1e-3, inv->phi, g.cfg)) {
                ++traced;
                worst = std::max(worst, c.invariant_drift);
                if (c.truncated) v.fail("hyp-es5: a trace stopped on a fault");
            }
        }
        if (traced == 0) v.fail("hyp-es5: no curves traced");
        if (worst > 1e-6) v.fail("hyp-es5: drift " + num(worst) + " > 1e-6 at h=1e-3");
        if (v.pass) v.note << ", " << traced << " fixture arcs drift <= " << num(worst);
    }

    {  // every expression tree the corpus touches differentiates consistently
        double worst = 0.0;
        int trees = 0;
        for (const Fixture& fx : g.all) {
            const FixtureOutcome& out = g.outcome(fx.id);
            std::vector<Expr> pool = {out.pde.a, out.pde.b, out.pde.c, out.pde.d,
                                      out.pde.e, out.pde.g, out.pde.f, out.map.phi,
                                      out.map.psi};
            if (out.lam.plus) pool.push_back(*out.lam.plus);
            if (out.lam.minus) pool.push_back(*out.lam.minus);
            if (fx.phi) pool.push_back(parse_expr(fx.phi->text, fx.vars));
            if (fx.psi) pool.push_back(parse_expr(fx.psi->text, fx.vars));
            for (const Expr& e : pool) {
                ++trees;
                for (const std::string& var : {fx.vars.first, fx.vars.second}) {
                    double gap = fd_derivative_gap(e, var, fx.vars, fx.region, g.cfg);
                    worst = std::max(worst, gap);
                    if (gap > 1e-5)
                        v.fail(fx.id + ": d/d" + var + " gap " + num(gap) + " > 1e-5");
                }
            }
        }
        if (v.pass) v.note << ", " << trees << " trees fd-consistent, worst gap " << num(worst);
    }
    return v;
}

}  // namespace

int main() {
    struct Row {
        const char* label;
        Verdict (*run)(Gate&);
    };
    const Row rows[] = {
        {"classification and characteristic slopes", classification_and_slopes},
        {"pinned canonical forms by every method", canonical_targets},
        {"independent reductions cross-validate", methods_agree},
        {"factor-condition verdicts and inverse twins", factor_conditions},
        {"solution templates certified by residuals", solution_templates},
        {"operator-identity battery", identity_battery},
        {"numeric traces and derivative cross-checks", numeric_agreement},
    };

    Gate g;
    try {
        g.all = load_corpus(default_corpus_path());
    } catch (const std::exception& ex) {
        std::printf("acceptance: cannot load corpus: %s\n", ex.what());
        return 1;
    }

    int passed = 0, id = 0;
    for (const Row& row : rows) {
        ++id;
        Verdict v;
        try {
            v = row.run(g);
        } catch (const std::exception& ex) {
            v.pass = false;
            v.note.str(std::string("threw: ") + ex.what());
        }
        if (v.pass) ++passed;
        std::printf("criterion %d: %s  %s (%s)\n", id, v.pass ? "PASS" : "FAIL", row.label,
                    v.note.str().c_str());
    }
    std::printf("acceptance: %d/7 criteria hold\n", passed);
    return passed == 7 ? 0 : 1;
}
