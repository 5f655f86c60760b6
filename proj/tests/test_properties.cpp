// Structural identities behind the factorization and reduction machinery,
// checked over the fixture corpus and a fixed probe family rather than
// hand-picked examples.
#include "doctest.h"

#include "characteristica/corpus.hpp"

using namespace characteristica;

namespace {
const OracleConfig kCfg{};

struct Instance {
    std::string id;
    Pde2 p;
    Classification cl;
    LambdaPair lam;
    FactorPair pair;
    SampleRegion reg;
    VarPair vars;
};

// Every hyperbolic/parabolic fixture becomes one property-test instance.
std::vector<Instance> instances() {
    std::vector<Instance> out;
    for (const Fixture& fx : load_corpus(default_corpus_path())) {
        Instance in{fx.id, parse_pde(fx.pde, fx.vars), {}, {}, {}, fx.region, fx.vars};
        in.cl = classify(in.p, in.reg, kCfg);
        in.lam = lambdas(in.p, in.cl.kind, in.reg, kCfg);
        in.pair = factor_principal(in.p, in.lam, in.cl.kind);
        out.push_back(std::move(in));
    }
    return out;
}
}  // namespace

TEST_CASE("the discriminant root squares back everywhere") {
    for (const Instance& in : instances()) {
        // the degenerate branch never takes a root: the stored one is a
        // placeholder zero
        if (in.lam.degenerate) continue;
        INFO(in.id);
        Expr delta = discriminant(in.p);
        CHECK(oracle_equal(mul(in.lam.root.root, in.lam.root.root), delta, in.vars, in.reg,
                           kCfg));
    }
}

TEST_CASE("monic slopes obey the sum and product laws") {
    for (const Instance& in : instances()) {
        if (in.lam.degenerate || !in.lam.plus || !in.lam.minus) continue;
        INFO(in.id);
        // lambda+ + lambda- == -2 b / a and lambda+ * lambda- == c / a
        Expr sum_claim = simplify(
            add(mul(in.p.a, add(*in.lam.plus, *in.lam.minus)), mul(number(2), in.p.b)));
        Expr prod_claim =
            simplify(sub(mul(in.p.a, mul(*in.lam.plus, *in.lam.minus)), in.p.c));
        CHECK(equiv_zero(sum_claim, in.vars, in.reg, kCfg));
        CHECK(equiv_zero(prod_claim, in.vars, in.reg, kCfg));
    }
}

TEST_CASE("both composition orders reproduce the principal part on probes") {
    for (const Instance& in : instances()) {
        INFO(in.id);
        for (const Expr& w : probe_family(in.vars)) {
            Expr lhs = principal_apply(in.p, w);
            Expr w2 = diff(w, in.vars.second);
            Expr mp = simplify(add(apply_op(in.pair.minus, apply_op(in.pair.plus, w, in.vars),
                                            in.vars),
                                   mul(in.pair.residue_minus, w2)));
            Expr pm = simplify(add(apply_op(in.pair.plus, apply_op(in.pair.minus, w, in.vars),
                                            in.vars),
                                   mul(in.pair.residue_plus, w2)));
            CHECK(equiv_zero(simplify(sub(lhs, mul(in.pair.leading, mp))), in.vars, in.reg,
                             kCfg));
            CHECK(equiv_zero(simplify(sub(lhs, mul(in.pair.leading, pm))), in.vars, in.reg,
                             kCfg));
        }
    }
}

TEST_CASE("the commutator acts as a pure second-variable derivative") {
    for (const Instance& in : instances()) {
        INFO(in.id);
        std::pair<Expr, Expr> rs = residue_terms(in.pair, in.vars);
        for (const Expr& w : probe_family(in.vars)) {
            Expr forward = apply_op(in.pair.minus, apply_op(in.pair.plus, w, in.vars), in.vars);
            Expr backward = apply_op(in.pair.plus, apply_op(in.pair.minus, w, in.vars), in.vars);
            Expr claim = simplify(sub(sub(forward, backward),
                                      mul(sub(rs.second, rs.first), diff(w, in.vars.second))));
            CHECK(equiv_zero(claim, in.vars, in.reg, kCfg));
        }
    }
}

TEST_CASE("the characteristic form is the product of the factor actions") {
    for (const Instance& in : instances()) {
        INFO(in.id);
        for (const Expr& w : probe_family(in.vars)) {
            Expr q = char_form(in.p, w);
            Expr claim;
            if (in.cl.kind == PdeClass::Parabolic) {
                Expr lw = apply_op(in.pair.minus, w, in.vars);
                claim = simplify(sub(q, mul(in.pair.leading, mul(lw, lw))));
            } else {
                claim = simplify(sub(q, mul(in.pair.leading,
                                            mul(apply_op(in.pair.plus, w, in.vars),
                                                apply_op(in.pair.minus, w, in.vars)))));
            }
            CHECK(equiv_zero(claim, in.vars, in.reg, kCfg));
        }
    }
}

TEST_CASE("principal action on an invariant collapses to the residue term") {
    OracleConfig cfg;
    for (const Fixture& fx : load_corpus(default_corpus_path())) {
        FixtureOutcome out = run_fixture(fx, cfg);
        REQUIRE(out.ok);
        INFO(fx.id);
        const TransitionMap& map = out.map;
        Expr claim_phi =
            simplify(sub(principal_apply(out.pde, map.phi),
                         mul(out.pair.leading,
                             mul(out.pair.residue_minus, diff(map.phi, fx.vars.second)))));
        CHECK(equiv_zero(claim_phi, fx.vars, fx.region, cfg));
        if (out.classification.kind == PdeClass::Hyperbolic) {
            Expr claim_psi =
                simplify(sub(principal_apply(out.pde, map.psi),
                             mul(out.pair.leading,
                                 mul(out.pair.residue_plus, diff(map.psi, fx.vars.second)))));
            CHECK(equiv_zero(claim_psi, fx.vars, fx.region, cfg));
        }
    }
}

TEST_CASE("chain-rule reductions kill the slots a characteristic map must kill") {
    OracleConfig cfg;
    for (const Fixture& fx : load_corpus(default_corpus_path())) {
        FixtureOutcome out = run_fixture(fx, cfg);
        REQUIRE(out.ok);
        INFO(fx.id);
        const CanonicalForm* chain = nullptr;
        for (const CanonicalForm& f : out.forms)
            if (f.method == "chain-rule") chain = &f;
        REQUIRE(chain != nullptr);
        CHECK(equiv_zero(chain->source.uxixi, fx.vars, fx.region, cfg));
        if (out.classification.kind == PdeClass::Hyperbolic)
            CHECK(equiv_zero(chain->source.uetaeta, fx.vars, fx.region, cfg));
        else
            CHECK(equiv_zero(chain->source.uxieta, fx.vars, fx.region, cfg));
    }
}

TEST_CASE("the parabolic second-order slot is the characteristic form of psi") {
    OracleConfig cfg;
    for (const Fixture& fx : load_corpus(default_corpus_path())) {
        FixtureOutcome out = run_fixture(fx, cfg);
        REQUIRE(out.ok);
        if (out.classification.kind != PdeClass::Parabolic) continue;
        INFO(fx.id);
        for (const CanonicalForm& f : out.forms)
            CHECK(oracle_equal(f.source.uetaeta, char_form(out.pde, out.map.psi), fx.vars,
                               fx.region, cfg));
    }
}

TEST_CASE("constant-coefficient mixed slots equal the closed discriminant formula") {
    VarPair xy{"x", "y"};
    SampleRegion reg{Rational(0), Rational(1), Rational(0), Rational(1), {}};
    Pde2 p = parse_pde("u_xx - u_yy = 0", xy);
    Classification cl = classify(p, reg, kCfg);
    FactorPair pair = factor_principal(p, lambdas(p, cl.kind, reg, kCfg), cl.kind);
    std::vector<CharacteristicOde> odes = char_odes(pair, xy);
    std::optional<Invariant> phi = solve_invariant(odes[0], xy, reg, kCfg);
    std::optional<Invariant> psi = solve_invariant(odes[1], xy, reg, kCfg);
    REQUIRE(phi);
    REQUIRE(psi);
    TransitionMap map = build_map(p, pair, *phi, *psi, std::nullopt, reg, kCfg);
    CanonicalForm form = reduce_compact(p, pair, map, reg, kCfg);
    // U_12 coefficient == -(4 delta / a) phi_2 psi_2
    Expr formula = simplify(mul(div(mul(number(-4), discriminant(p)), p.a),
                                mul(diff(map.phi, xy.second), diff(map.psi, xy.second))));
    CHECK(oracle_equal(form.source.uxieta, formula, xy, reg, kCfg));
}

TEST_CASE("jacobian reciprocity holds for every supplied inverse") {
    OracleConfig cfg;
    VarPair tv = target_vars();
    for (const Fixture& fx : load_corpus(default_corpus_path())) {
        if (!fx.inverse) continue;
        FixtureOutcome out = run_fixture(fx, cfg);
        REQUIRE(out.ok);
        INFO(fx.id);
        REQUIRE(out.map.has_inverse());
        Expr inv_j = simplify(
            sub(mul(diff(*out.map.inv_phi, tv.first), diff(*out.map.inv_psi, tv.second)),
                mul(diff(*out.map.inv_phi, tv.second), diff(*out.map.inv_psi, tv.first))));
        Expr product = simplify(mul(out.map.jacobian(), out.map.to_source(inv_j)));
        CHECK(oracle_equal(product, number(1), fx.vars, fx.region, cfg));
    }
}

TEST_CASE("round trips through a supplied inverse are the identity") {
    OracleConfig cfg;
    for (const Fixture& fx : load_corpus(default_corpus_path())) {
        if (!fx.inverse) continue;
        FixtureOutcome out = run_fixture(fx, cfg);
        REQUIRE(out.ok);
        INFO(fx.id);
        CHECK(oracle_equal(out.map.to_source(out.map.to_target(symbol(fx.vars.first))),
                           symbol(fx.vars.first), fx.vars, fx.region, cfg));
        CHECK(oracle_equal(out.map.to_source(out.map.to_target(symbol(fx.vars.second))),
                           symbol(fx.vars.second), fx.vars, fx.region, cfg));
    }
}
