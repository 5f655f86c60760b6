#include "characteristica/report.hpp"

#include <cstdio>

namespace characteristica {

namespace {

OrderedJson text_or_null(const std::optional<Expr>& e) {
    if (!e) return nullptr;
    return pretty_text(*e);
}

OrderedJson json_slots(const CanonicalSlots& s) {
    OrderedJson j;
    std::vector<Expr> values = slot_list(s);
    for (int i = 0; i < 7; ++i) j[kSlotNames[i]] = pretty_text(values[i]);
    return j;
}

OrderedJson json_witness(const std::optional<ConditionWitness>& w) {
    if (!w) return nullptr;
    return OrderedJson{{"witness", pretty_text(w->witness)}, {"zero", w->zero}};
}

OrderedJson json_op(const FirstOrderOp& op) {
    OrderedJson j;
    j["alpha"] = pretty_text(op.alpha);
    j["beta"] = pretty_text(op.beta);
    j["lambda"] = op.lambda ? OrderedJson(pretty_text(*op.lambda)) : OrderedJson(nullptr);
    return j;
}

}  // namespace

std::string number_text(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string render_json(const OrderedJson& j) { return j.dump(2) + "\n"; }

OrderedJson json_classify(const Pde2& p, const Classification& c, const LambdaPair& lam) {
    OrderedJson j;
    j["equation"] = p.text;
    j["classification"] = pde_class_name(c.kind);
    j["discriminant"] = pretty_text(c.delta);
    j["lambda_plus"] = text_or_null(lam.plus);
    j["lambda_minus"] = text_or_null(lam.minus);
    j["degenerate"] = lam.degenerate;
    j["evidence"] = OrderedJson{{"positive", c.positive},
                                {"negative", c.negative},
                                {"near_zero", c.near_zero},
                                {"min", number_text(c.min_value)},
                                {"max", number_text(c.max_value)}};
    return j;
}

OrderedJson json_factor(const FactorPair& pair) {
    OrderedJson j;
    j["kind"] = pde_class_name(pair.kind);
    j["leading"] = pretty_text(pair.leading);
    j["degenerate"] = pair.degenerate;
    j["plus"] = json_op(pair.plus);
    j["minus"] = json_op(pair.minus);
    return j;
}

OrderedJson json_conditions(const CommutatorReport& cr) {
    OrderedJson j;
    j["r_minus"] = pretty_text(cr.r_minus);
    j["r_plus"] = pretty_text(cr.r_plus);
    j["commutator"] = pretty_text(cr.commutator);
    j["commutes"] = cr.commutes;
    j["residue_free_minus"] = cr.residue_free_minus;
    j["residue_free_plus"] = cr.residue_free_plus;
    j["map_form_consistent"] =
        cr.map_form_consistent ? OrderedJson(*cr.map_form_consistent) : OrderedJson(nullptr);
    return j;
}

OrderedJson json_parabolic_condition(const Expr& residue, bool zero) {
    OrderedJson j;
    j["lambda_residue"] = pretty_text(residue);
    j["zero"] = zero;
    return j;
}

OrderedJson json_invariant(const Invariant& inv, bool verified) {
    OrderedJson j;
    j["family"] = char_family_name(inv.family);
    j["phi_text"] = pretty_text(inv.phi);
    j["provenance"] = provenance_name(inv.provenance);
    j["verified"] = verified;
    return j;
}

OrderedJson json_map(const TransitionMap& map) {
    OrderedJson j;
    j["vars"] = OrderedJson::array({map.vars.first, map.vars.second});
    j["xi"] = pretty_text(map.phi);
    j["eta"] = pretty_text(map.psi);
    j["inverse_xi"] = text_or_null(map.inv_phi);
    j["inverse_eta"] = text_or_null(map.inv_psi);
    j["kind"] = pde_class_name(map.kind);
    return j;
}

OrderedJson json_form(const CanonicalForm& form) {
    OrderedJson j;
    j["method"] = form.method;
    j["kind"] = pde_class_name(form.kind);
    j["coefficients"] = json_slots(form.source);
    j["mapped"] = form.target ? json_slots(*form.target) : OrderedJson(nullptr);
    j["normalized_by"] = text_or_null(form.normalized_by);
    j["normalized"] = form.normalized ? json_slots(*form.normalized) : OrderedJson(nullptr);
    j["normalized_mapped"] =
        form.normalized_target ? json_slots(*form.normalized_target) : OrderedJson(nullptr);
    return j;
}

OrderedJson json_inverse_conditions(const InverseConditionReport& rep) {
    OrderedJson j;
    j["kind"] = pde_class_name(rep.kind);
    j["phi_xieta"] = json_witness(rep.phi_xieta);
    j["psi_xieta"] = json_witness(rep.psi_xieta);
    j["residue_minus_twin"] = json_witness(rep.residue_minus_twin);
    j["residue_plus_twin"] = json_witness(rep.residue_plus_twin);
    j["phi_etaeta"] = json_witness(rep.phi_etaeta);
    j["psi_etaeta"] = json_witness(rep.psi_etaeta);
    j["identity"] = json_witness(rep.parabolic_identity);
    j["commutes"] = rep.commutes ? OrderedJson(*rep.commutes) : OrderedJson(nullptr);
    j["residue_free"] = rep.residue_free ? OrderedJson(*rep.residue_free) : OrderedJson(nullptr);
    return j;
}

OrderedJson json_solution(const GeneralSolution& sol) {
    OrderedJson j;
    j["template"] = sol.text();
    j["rule"] = sol.rule;
    j["coords"] = OrderedJson::array({sol.coords.first, sol.coords.second});
    j["base"] = text_or_null(sol.base);
    OrderedJson terms = OrderedJson::array();
    for (const SolutionTerm& t : sol.terms)
        terms.push_back(OrderedJson{{"coeff", pretty_text(t.coeff)},
                                    {"slot", std::string(1, t.slot)},
                                    {"arg", pretty_text(t.arg)}});
    j["terms"] = terms;
    return j;
}

OrderedJson json_residual(const ResidualReport& rr) {
    OrderedJson j;
    j["symbolic"] = OrderedJson{{"equal", rr.symbolic.equal},
                                {"max_violation", number_text(rr.symbolic.max_violation)},
                                {"max_abs", number_text(rr.symbolic.max_abs)},
                                {"samples", rr.symbolic.samples}};
    j["finite_difference"] = OrderedJson{{"ok", rr.fd_ok},
                                         {"max_violation", number_text(rr.fd_max_violation)},
                                         {"max_abs", number_text(rr.fd_max_abs)},
                                         {"samples", rr.fd_samples},
                                         {"excluded", rr.fd_excluded}};
    j["ok"] = rr.ok();
    return j;
}

OrderedJson json_curve(const Curve& c, bool include_points) {
    OrderedJson j;
    j["seed"] = OrderedJson::array({number_text(c.seed.a), number_text(c.seed.b)});
    j["step"] = number_text(c.step);
    j["points"] = static_cast<int>(c.points.size());
    j["closed"] = c.closed;
    j["truncated"] = c.truncated;
    j["invariant_at_seed"] = c.invariant_at_seed ? OrderedJson(number_text(*c.invariant_at_seed))
                                                 : OrderedJson(nullptr);
    j["invariant_drift"] = number_text(c.invariant_drift);
    j["max_ode_gap"] = number_text(c.max_ode_gap);
    if (include_points) {
        OrderedJson pts = OrderedJson::array();
        for (const SamplePoint& p : c.points)
            pts.push_back(OrderedJson::array({number_text(p.a), number_text(p.b)}));
        j["trace"] = pts;
    }
    return j;
}

OrderedJson json_fixture_outcome(const FixtureOutcome& out) {
    OrderedJson j;
    j["id"] = out.id;
    j["ok"] = out.ok;
    j["classification"] = pde_class_name(out.classification.kind);
    j["class_ok"] = out.class_ok;
    j["lambda_ok"] = out.lambda_ok;
    j["conditions_ok"] = out.conditions_ok;
    j["methods"] = static_cast<int>(out.forms.size());
    j["cross_validated"] = out.cross_validated;
    j["canonical_ok"] = out.canonical_ok;
    j["rule"] = out.solution ? OrderedJson(out.solution->rule) : OrderedJson(nullptr);
    j["rule_ok"] = out.rule_ok;
    j["probes_ok"] = out.probes_ok;
    j["particular_ok"] = out.particular_ok;
    j["operator_checks_ok"] = out.operator_checks_ok;
    j["worst_residual"] = number_text(out.worst_residual);
    j["messages"] = out.messages;
    return j;
}

}  // namespace characteristica
