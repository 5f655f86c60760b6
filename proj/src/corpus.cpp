#include "characteristica/corpus.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace characteristica {

namespace {

using nlohmann::json;

Rational rational_field(const json& j, const char* what) {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) {
        Expr e = simplify(parse_expr(j.get<std::string>(), VarPair{"x", "y"}));
        if (e->kind == NodeKind::Number) return e->value;
    }
    throw ParseError(std::string("corpus: ") + what + " must be an integer or a rational string");
}

SampleRegion region_field(const json& j, const VarPair& vars) {
    SampleRegion r;
    r.lo1 = rational_field(j.at(0), "region bound");
    r.hi1 = rational_field(j.at(1), "region bound");
    r.lo2 = rational_field(j.at(2), "region bound");
    r.hi2 = rational_field(j.at(3), "region bound");
    (void)vars;
    return r;
}

std::optional<FixtureInvariant> invariant_field(const json& fx, const char* key) {
    if (!fx.contains(key)) return std::nullopt;
    const json& j = fx.at(key);
    FixtureInvariant inv;
    inv.text = j.at("text").get<std::string>();
    inv.user = j.value("user", false);
    return inv;
}

}  // namespace

std::string default_corpus_path() {
    if (const char* env = std::getenv("CHARACTERISTICA_CORPUS"); env && *env) return env;
    if (std::filesystem::exists("data/corpus.json")) return "data/corpus.json";
#ifdef CHARACTERISTICA_SOURCE_DIR
    return std::string(CHARACTERISTICA_SOURCE_DIR) + "/data/corpus.json";
#else
    return "data/corpus.json";
#endif
}

std::vector<Fixture> load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw EngineError("cannot open corpus file: " + path);
    json doc = json::parse(in);

    std::vector<Fixture> out;
    for (const json& j : doc.at("fixtures")) {
        Fixture fx;
        fx.id = j.at("id").get<std::string>();
        fx.pde = j.at("pde").get<std::string>();
        fx.vars = VarPair{j.at("vars").at(0).get<std::string>(),
                          j.at("vars").at(1).get<std::string>()};
        fx.region = region_field(j.at("region"), fx.vars);
        fx.expect_class = j.at("class").get<std::string>();
        if (j.contains("lambda_plus")) fx.lambda_plus = j.at("lambda_plus").get<std::string>();
        if (j.contains("lambda_minus")) fx.lambda_minus = j.at("lambda_minus").get<std::string>();
        if (j.contains("lambda_repeated"))
            fx.lambda_repeated = j.at("lambda_repeated").get<std::string>();
        fx.phi = invariant_field(j, "phi");
        fx.psi = invariant_field(j, "psi");
        fx.map_from_supplied = j.value("map_from_supplied", false);
        if (j.contains("inverse"))
            fx.inverse = std::make_pair(j.at("inverse").at("phi").get<std::string>(),
                                        j.at("inverse").at("psi").get<std::string>());
        if (j.contains("conditions")) {
            const json& c = j.at("conditions");
            if (c.contains("commutes")) fx.conditions.commutes = c.at("commutes").get<bool>();
            if (c.contains("residue_free_minus"))
                fx.conditions.residue_free_minus = c.at("residue_free_minus").get<bool>();
            if (c.contains("residue_free_plus"))
                fx.conditions.residue_free_plus = c.at("residue_free_plus").get<bool>();
            if (c.contains("r_minus")) fx.conditions.r_minus = c.at("r_minus").get<std::string>();
            if (c.contains("r_plus")) fx.conditions.r_plus = c.at("r_plus").get<std::string>();
            if (c.contains("lambda_residue"))
                fx.conditions.lambda_residue = c.at("lambda_residue").get<std::string>();
            if (c.contains("lambda_residue_zero"))
                fx.conditions.lambda_residue_zero = c.at("lambda_residue_zero").get<bool>();
        }
        if (j.contains("canonical"))
            for (auto it = j.at("canonical").begin(); it != j.at("canonical").end(); ++it)
                fx.canonical[it.key()] = it.value().get<std::string>();
        if (j.contains("operator_checks"))
            for (const json& oc : j.at("operator_checks"))
                fx.operator_checks.push_back({oc.at("op").get<std::string>(),
                                              oc.at("arg").get<std::string>(),
                                              oc.at("equals").get<std::string>()});
        if (j.contains("solution")) {
            const json& s = j.at("solution");
            fx.solution.rule = s.value("rule", std::string{});
            if (s.contains("particular"))
                for (const json& t : s.at("particular"))
                    fx.solution.particular.push_back(t.get<std::string>());
        }
        fx.notes = j.value("notes", std::string{});
        out.push_back(std::move(fx));
    }
    return out;
}

const Fixture& find_fixture(const std::vector<Fixture>& all, const std::string& id) {
    for (const Fixture& fx : all)
        if (fx.id == id) return fx;
    throw EngineError("no fixture named " + id);
}

bool canonical_matches(const CanonicalForm& form, const TransitionMap& map,
                       const std::map<std::string, std::string>& expected,
                       const SampleRegion& region, const OracleConfig& cfg) {
    const char* lead_name = form.kind == PdeClass::Parabolic ? "uetaeta" : "uxieta";
    auto lead_it = expected.find(lead_name);
    if (lead_it == expected.end()) return false;
    VarPair tv = target_vars();
    Expr e_lead = map.to_source(parse_expr(lead_it->second, tv));

    std::vector<Expr> got = slot_list(form.source);
    Expr got_lead;
    for (int i = 0; i < 7; ++i)
        if (std::string(kSlotNames[i]) == lead_name) got_lead = got[i];

    for (int i = 0; i < 7; ++i) {
        auto it = expected.find(kSlotNames[i]);
        Expr e_slot = it == expected.end() ? number(0) : map.to_source(parse_expr(it->second, tv));
        Expr cross = simplify(sub(mul(got[i], e_lead), mul(e_slot, got_lead)));
        if (!equiv_zero(cross, map.vars, region, cfg)) return false;
    }
    return true;
}

namespace {

void note(FixtureOutcome& out, bool& flag, bool ok, const std::string& msg) {
    if (!ok) {
        flag = false;
        out.messages.push_back(msg);
    }
}

}  // namespace

FixtureOutcome run_fixture(const Fixture& fx, const OracleConfig& cfg) {
    FixtureOutcome out;
    out.id = fx.id;
    out.pde = parse_pde(fx.pde, fx.vars);
    const Pde2& p = out.pde;
    const SampleRegion& reg = fx.region;
    VarPair tv = target_vars();

    out.classification = classify(p, reg, cfg);
    out.class_ok = fx.expect_class == pde_class_name(out.classification.kind);
    if (!out.class_ok)
        out.messages.push_back("classified as " +
                               std::string(pde_class_name(out.classification.kind)) +
                               ", expected " + fx.expect_class);

    out.lam = lambdas(p, out.classification.kind, reg, cfg);
    auto lambda_check = [&](const std::optional<std::string>& want,
                            const std::optional<Expr>& got, const char* which) {
        if (!want) return;
        bool ok = got && oracle_equal(*got, parse_expr(*want, fx.vars), fx.vars, reg, cfg);
        note(out, out.lambda_ok, ok, std::string("slope ") + which + " mismatch");
    };
    lambda_check(fx.lambda_plus, out.lam.plus, "plus");
    lambda_check(fx.lambda_minus, out.lam.minus, "minus");
    lambda_check(fx.lambda_repeated, out.lam.plus, "repeated");

    out.pair = factor_principal(p, out.lam, out.classification.kind);
    bool parabolic = out.classification.kind == PdeClass::Parabolic;

    // ---- invariants: solve, compare, pick the map's pair ----
    std::vector<CharacteristicOde> odes = char_odes(out.pair, fx.vars);
    std::optional<Invariant> solved_phi =
        odes.empty() ? std::nullopt : solve_invariant(odes[0], fx.vars, reg, cfg);
    std::optional<Invariant> solved_psi =
        odes.size() > 1 ? solve_invariant(odes[1], fx.vars, reg, cfg) : std::nullopt;

    auto supplied = [&](const FixtureInvariant& inv, CharFamily fam) {
        return Invariant{simplify(parse_expr(inv.text, fx.vars)), fam,
                         inv.user ? Provenance::UserSupplied : Provenance::FixtureSupplied};
    };
    if (fx.phi && solved_phi)
        out.solved_phi_equivalent = invariant_equivalent(
            solved_phi->phi, parse_expr(fx.phi->text, fx.vars), fx.vars, reg, cfg);
    if (fx.psi && solved_psi)
        out.solved_psi_equivalent = invariant_equivalent(
            solved_psi->phi, parse_expr(fx.psi->text, fx.vars), fx.vars, reg, cfg);
    note(out, out.conditions_ok, !out.solved_phi_equivalent || *out.solved_phi_equivalent,
         "solved phi disagrees with the pinned invariant");
    note(out, out.conditions_ok, !out.solved_psi_equivalent || *out.solved_psi_equivalent,
         "solved psi disagrees with the pinned invariant");

    bool use_supplied = fx.map_from_supplied || (fx.phi && fx.phi->user);
    std::optional<Invariant> map_phi, map_psi;
    if (use_supplied && fx.phi)
        map_phi = supplied(*fx.phi, parabolic ? CharFamily::Parabolic : CharFamily::Plus);
    else if (solved_phi)
        map_phi = solved_phi;
    else if (fx.phi)
        map_phi = supplied(*fx.phi, parabolic ? CharFamily::Parabolic : CharFamily::Plus);
    if (!parabolic) {
        if (use_supplied && fx.psi)
            map_psi = supplied(*fx.psi, CharFamily::Minus);
        else if (solved_psi)
            map_psi = solved_psi;
        else if (fx.psi)
            map_psi = supplied(*fx.psi, CharFamily::Minus);
    }
    if (!map_phi || (!parabolic && !map_psi)) {
        out.messages.push_back("no usable invariant pair");
        out.ok = false;
        return out;
    }

    std::optional<std::pair<Expr, Expr>> inverse;
    if (fx.inverse)
        inverse = std::make_pair(parse_expr(fx.inverse->first, tv),
                                 parse_expr(fx.inverse->second, tv));

    if (parabolic) {
        std::optional<Expr> user_psi;
        if (fx.psi) user_psi = parse_expr(fx.psi->text, fx.vars);
        out.map = build_map_parabolic(p, out.pair, *map_phi, user_psi, inverse, reg, cfg);
    } else {
        out.map = build_map(p, out.pair, *map_phi, *map_psi, inverse, reg, cfg);
    }

    // ---- factor conditions ----
    if (parabolic) {
        out.lambda_residue = parabolic_lambda_residue(out.pair.minus, fx.vars);
        if (fx.conditions.lambda_residue)
            note(out, out.conditions_ok,
                 oracle_equal(*out.lambda_residue,
                              parse_expr(*fx.conditions.lambda_residue, fx.vars), fx.vars, reg,
                              cfg),
                 "parabolic residue mismatch");
        if (fx.conditions.lambda_residue_zero)
            note(out, out.conditions_ok,
                 equiv_zero(*out.lambda_residue, fx.vars, reg, cfg) ==
                     *fx.conditions.lambda_residue_zero,
                 "parabolic residue zero-flag mismatch");
    } else {
        out.commutator = commutator_report(
            p, out.pair, std::make_pair(out.map.phi, out.map.psi), reg, cfg);
        const CommutatorReport& cr = *out.commutator;
        if (fx.conditions.commutes)
            note(out, out.conditions_ok, cr.commutes == *fx.conditions.commutes,
                 "commutation flag mismatch");
        if (fx.conditions.residue_free_minus)
            note(out, out.conditions_ok,
                 cr.residue_free_minus == *fx.conditions.residue_free_minus,
                 "minus residue flag mismatch");
        if (fx.conditions.residue_free_plus)
            note(out, out.conditions_ok,
                 cr.residue_free_plus == *fx.conditions.residue_free_plus,
                 "plus residue flag mismatch");
        if (fx.conditions.r_minus)
            note(out, out.conditions_ok,
                 oracle_equal(cr.r_minus, parse_expr(*fx.conditions.r_minus, fx.vars), fx.vars,
                              reg, cfg),
                 "r_minus mismatch");
        if (fx.conditions.r_plus)
            note(out, out.conditions_ok,
                 oracle_equal(cr.r_plus, parse_expr(*fx.conditions.r_plus, fx.vars), fx.vars,
                              reg, cfg),
                 "r_plus mismatch");
        note(out, out.conditions_ok, !cr.map_form_consistent || *cr.map_form_consistent,
             "operator and map forms of the conditions disagree");
    }

    // ---- reductions ----
    out.forms.push_back(reduce_compact(p, out.pair, out.map, reg, cfg));
    out.forms.push_back(reduce_chain_rule(p, out.map, reg, cfg));
    bool monic = simplify(p.a)->kind != NodeKind::Number ||
                 simplify(p.a)->value != Rational(0);
    if (out.map.has_inverse() && monic)
        out.forms.push_back(reduce_inverse_map(p, out.map, reg, cfg));
    out.cross_validated = cross_validate(out.forms, fx.vars, reg, cfg);
    if (!out.cross_validated) out.messages.push_back("reduction methods disagree");

    if (!fx.canonical.empty()) {
        out.canonical_ok = true;
        for (const CanonicalForm& f : out.forms)
            if (!canonical_matches(f, out.map, fx.canonical, reg, cfg)) {
                out.canonical_ok = false;
                out.messages.push_back("canonical slots of the " + f.method +
                                       " form differ from the pinned equation");
            }
    }

    if (out.map.has_inverse()) {
        out.inverse_conditions = inverse_condition_report(out.map, reg, cfg);
        if (out.commutator) {
            const auto& ic = *out.inverse_conditions;
            note(out, out.conditions_ok,
                 ic.commutes && *ic.commutes == out.commutator->commutes,
                 "inverse-form commutation twin disagrees");
            bool both_free =
                out.commutator->residue_free_minus && out.commutator->residue_free_plus;
            note(out, out.conditions_ok, ic.residue_free && *ic.residue_free == both_free,
                 "inverse-form residue twin disagrees");
        }
    }

    // ---- closed forms ----
    out.solution = solve_canonical(out.forms.front(), out.map, reg, cfg);
    if (fx.solution.rule.empty()) {
        out.rule_ok = !out.solution.has_value();
        if (!out.rule_ok) out.messages.push_back("unexpected solution template " + out.solution->rule);
    } else {
        out.rule_ok = out.solution && out.solution->rule == fx.solution.rule;
        if (!out.rule_ok)
            out.messages.push_back("expected solution template " + fx.solution.rule);
    }

    auto check_residual = [&](const Expr& u, const std::string& label) {
        ResidualReport rr = residual(p, u, reg, cfg);
        out.worst_residual = std::max(
            out.worst_residual, std::max(rr.symbolic.max_violation, rr.fd_max_violation));
        if (!rr.ok()) out.messages.push_back(label + " fails the residual check");
        return rr.ok();
    };
    if (out.solution) {
        GeneralSolution down = pull_back(*out.solution, out.map);
        std::pair<ProbeFn, ProbeFn> probes[2] = {{ProbeFn::Sin, ProbeFn::Cos},
                                                 {ProbeFn::Exp, ProbeFn::Square}};
        for (auto [f, g] : probes) {
            bool ok = check_residual(instantiate(down, f, g), "instantiated template");
            if (!ok) out.probes_ok = false;
        }
    }
    for (const std::string& text : fx.solution.particular)
        if (!check_residual(simplify(parse_expr(text, fx.vars)), "pinned solution"))
            out.particular_ok = false;

    for (const FixtureOperatorCheck& oc : fx.operator_checks) {
        Expr w = oc.arg == "psi" ? out.map.psi : out.map.phi;
        Expr got;
        if (oc.op == "P")
            got = principal_apply(p, w);
        else if (oc.op == "L+")
            got = apply_op(out.pair.plus, w, fx.vars);
        else if (oc.op == "L-")
            got = apply_op(out.pair.minus, w, fx.vars);
        else
            throw EngineError("unknown operator check " + oc.op);
        note(out, out.operator_checks_ok,
             oracle_equal(got, parse_expr(oc.equals, fx.vars), fx.vars, reg, cfg),
             "operator check " + oc.op + "[" + oc.arg + "] mismatch");
    }

    out.ok = out.class_ok && out.lambda_ok && out.conditions_ok && out.cross_validated &&
             out.canonical_ok && out.rule_ok && out.probes_ok && out.particular_ok &&
             out.operator_checks_ok;
    return out;
}

}  // namespace characteristica
