#include "characteristica/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "characteristica/plot.hpp"
#include "characteristica/report.hpp"

namespace characteristica {

namespace {

// Options shared by every equation-driven subcommand.
struct CommonOpts {
    std::string pde;
    std::string vars = "x,y";
    std::string region = "0,1,0,1";
    std::uint64_t seed = 0;
    bool seed_given = false;
    double tol = 0;
    bool tol_given = false;
    bool json = false;
};

void attach_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("pde", o.pde, "equation text, e.g. \"u_xx - u_yy = 0\"")->required();
    cmd->add_option("--vars", o.vars, "variable pair, e.g. x,y (order matters)");
    cmd->add_option("--region", o.region, "sample rectangle lo1,hi1,lo2,hi2");
    cmd->add_option("--seed", o.seed, "sampling seed");
    cmd->add_option("--tol", o.tol, "oracle tolerance (absolute and relative)");
    cmd->add_flag("--json", o.json, "machine-readable output");
}

// --seed / --tol only override the defaults when actually present.
void note_overrides(const CLI::App* cmd, CommonOpts& o) {
    o.seed_given = cmd->count("--seed") > 0;
    o.tol_given = cmd->count("--tol") > 0;
}

Rational rational_arg(const std::string& text) {
    Expr e = simplify(parse_expr(text, VarPair{"x", "y"}));
    if (e->kind != NodeKind::Number)
        throw ParseError("expected a rational number, got: " + text);
    return e->value;
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

struct Pipeline {
    VarPair vars;
    SampleRegion region;
    OracleConfig cfg;
    Pde2 p;
    Classification cl;
    LambdaPair lam;   // empty slots for elliptic/mixed input
    std::optional<FactorPair> factors;

    [[nodiscard]] const FactorPair& pair() const {
        if (!factors)
            throw EngineError("no real characteristics: the equation is " +
                              std::string(pde_class_name(cl.kind)) + " on this region");
        return *factors;
    }
};

Pipeline make_pipeline(const CommonOpts& o) {
    Pipeline pl;
    std::vector<std::string> vs = split_commas(o.vars);
    if (vs.size() != 2 || vs[0].empty() || vs[1].empty() || vs[0] == vs[1])
        throw ParseError("--vars needs two distinct names, e.g. x,y");
    pl.vars = VarPair{vs[0], vs[1]};

    std::vector<std::string> rs = split_commas(o.region);
    if (rs.size() != 4) throw ParseError("--region needs lo1,hi1,lo2,hi2");
    pl.region = SampleRegion{rational_arg(rs[0]), rational_arg(rs[1]), rational_arg(rs[2]),
                             rational_arg(rs[3]),
                             {}};

    if (o.seed_given) {
        pl.cfg.seed = o.seed;
    } else if (const char* env = std::getenv("CHARACTERISTICA_SEED"); env && *env) {
        pl.cfg.seed = std::strtoull(env, nullptr, 10);
    }
    if (o.tol_given) {
        pl.cfg.tol_abs = o.tol;
        pl.cfg.tol_rel = o.tol;
    }

    pl.p = parse_pde(o.pde, pl.vars);
    pl.cl = classify(pl.p, pl.region, pl.cfg);
    if (pl.cl.kind == PdeClass::Hyperbolic || pl.cl.kind == PdeClass::Parabolic) {
        pl.lam = lambdas(pl.p, pl.cl.kind, pl.region, pl.cfg);
        pl.factors = factor_principal(pl.p, pl.lam, pl.cl.kind);
    }
    return pl;
}

// Solve or accept the invariant for one family; user text is validated
// against the family's operator before anything downstream may use it.
Invariant family_invariant(const Pipeline& pl, CharFamily family,
                           const std::optional<std::string>& user_text) {
    const FirstOrderOp& op = family == CharFamily::Minus ? pl.pair().minus : pl.pair().plus;
    if (user_text) {
        Expr phi = simplify(parse_expr(*user_text, pl.vars));
        if (!verify_invariant(op, phi, pl.vars, pl.region, pl.cfg))
            throw EngineError("supplied " + std::string(char_family_name(family)) +
                              " invariant fails its operator check on this region");
        return Invariant{phi, family, Provenance::UserSupplied};
    }
    std::vector<CharacteristicOde> odes = char_odes(pl.pair(), pl.vars);
    std::size_t idx = family == CharFamily::Minus ? 1 : 0;
    std::optional<Invariant> solved;
    if (idx < odes.size()) solved = solve_invariant(odes[idx], pl.vars, pl.region, pl.cfg);
    if (!solved)
        throw EngineError(std::string("no closed-form ") + char_family_name(family) +
                          " invariant found; supply one with --phi/--psi");
    return *solved;
}

TransitionMap pipeline_map(const Pipeline& pl, const std::optional<std::string>& phi_text,
                           const std::optional<std::string>& psi_text,
                           const std::optional<std::string>& inv_phi_text,
                           const std::optional<std::string>& inv_psi_text) {
    std::optional<std::pair<Expr, Expr>> inverse;
    if (inv_phi_text.has_value() != inv_psi_text.has_value())
        throw ParseError("--inv-phi and --inv-psi must be given together");
    if (inv_phi_text)
        inverse = std::make_pair(parse_expr(*inv_phi_text, target_vars()),
                                 parse_expr(*inv_psi_text, target_vars()));

    if (pl.cl.kind == PdeClass::Parabolic) {
        Invariant phi = family_invariant(pl, CharFamily::Parabolic, phi_text);
        std::optional<Expr> user_psi;
        if (psi_text) user_psi = simplify(parse_expr(*psi_text, pl.vars));
        return build_map_parabolic(pl.p, pl.pair(), phi, user_psi, inverse, pl.region, pl.cfg);
    }
    if (pl.cl.kind != PdeClass::Hyperbolic)
        throw EngineError("reduction needs a hyperbolic or parabolic equation on the region");
    Invariant phi = family_invariant(pl, CharFamily::Plus, phi_text);
    Invariant psi = family_invariant(pl, CharFamily::Minus, psi_text);
    return build_map(pl.p, pl.pair(), phi, psi, inverse, pl.region, pl.cfg);
}

// ---- human-readable renderers ----

void print_classify(std::ostream& out, const Pipeline& pl) {
    out << "classification: " << pde_class_name(pl.cl.kind) << "\n";
    out << "discriminant:   " << pretty_text(pl.cl.delta) << "\n";
    if (pl.lam.plus) out << "lambda+:        " << pretty_text(*pl.lam.plus) << "\n";
    if (pl.lam.minus) out << "lambda-:        " << pretty_text(*pl.lam.minus) << "\n";
    out << "evidence:       " << pl.cl.positive << " positive, " << pl.cl.negative
        << " negative, " << pl.cl.near_zero << " near zero\n";
}

void print_op(std::ostream& out, const char* name, const FirstOrderOp& op) {
    out << name << ": (" << pretty_text(op.alpha) << ") d1 - (" << pretty_text(op.beta)
        << ") d2";
    if (op.lambda) out << "   [slope " << pretty_text(*op.lambda) << "]";
    out << "\n";
}

void print_form(std::ostream& out, const CanonicalForm& form) {
    out << "method " << form.method << ":\n";
    std::vector<Expr> slots = slot_list(form.source);
    for (int i = 0; i < 7; ++i) {
        std::string text = pretty_text(slots[i]);
        if (text != "0" || std::string(kSlotNames[i]) == "rhs")
            out << "  " << kSlotNames[i] << " = " << text << "\n";
    }
    if (form.target) {
        std::vector<Expr> mapped = slot_list(*form.target);
        out << "  in (xi, eta):\n";
        for (int i = 0; i < 7; ++i) {
            std::string text = pretty_text(mapped[i]);
            if (text != "0" || std::string(kSlotNames[i]) == "rhs")
                out << "    " << kSlotNames[i] << " = " << text << "\n";
        }
    }
    if (form.normalized_by)
        out << "  normalized by " << pretty_text(*form.normalized_by) << "\n";
}

// ---- subcommand bodies ----

int cmd_classify(const CommonOpts& o, std::ostream& out) {
    Pipeline pl = make_pipeline(o);
    if (o.json)
        out << render_json(json_classify(pl.p, pl.cl, pl.lam));
    else
        print_classify(out, pl);
    return 0;
}

int cmd_factor(const CommonOpts& o, std::ostream& out) {
    Pipeline pl = make_pipeline(o);
    if (o.json) {
        out << render_json(json_factor(pl.pair()));
    } else {
        out << "principal part = (" << pretty_text(pl.pair().leading) << ") * L+ L-\n";
        print_op(out, "L+", pl.pair().plus);
        print_op(out, "L-", pl.pair().minus);
    }
    return 0;
}

int cmd_conditions(const CommonOpts& o, const std::optional<std::string>& phi_text,
                   const std::optional<std::string>& psi_text, std::ostream& out) {
    Pipeline pl = make_pipeline(o);
    if (pl.cl.kind == PdeClass::Parabolic) {
        Expr residue = parabolic_lambda_residue(pl.pair().minus, pl.vars);
        bool zero = equiv_zero(residue, pl.vars, pl.region, pl.cfg);
        if (o.json) {
            out << render_json(json_parabolic_condition(residue, zero));
        } else {
            out << "L[lambda] = " << pretty_text(residue) << (zero ? "  (vanishes)" : "") << "\n";
        }
        return 0;
    }
    std::optional<std::pair<Expr, Expr>> invariants;
    if (phi_text && psi_text)
        invariants = std::make_pair(simplify(parse_expr(*phi_text, pl.vars)),
                                    simplify(parse_expr(*psi_text, pl.vars)));
    CommutatorReport cr = commutator_report(pl.p, pl.pair(), invariants, pl.region, pl.cfg);
    if (o.json) {
        out << render_json(json_conditions(cr));
    } else {
        out << "r- = " << pretty_text(cr.r_minus) << "\n";
        out << "r+ = " << pretty_text(cr.r_plus) << "\n";
        out << "factors " << (cr.commutes ? "commute" : "do not commute") << "\n";
        out << "residue-free: minus " << (cr.residue_free_minus ? "yes" : "no") << ", plus "
            << (cr.residue_free_plus ? "yes" : "no") << "\n";
        if (cr.map_form_consistent)
            out << "map-form check: " << (*cr.map_form_consistent ? "consistent" : "INCONSISTENT")
                << "\n";
    }
    return 0;
}

int cmd_invariants(const CommonOpts& o, const std::optional<std::string>& phi_text,
                   const std::optional<std::string>& psi_text, std::ostream& out) {
    Pipeline pl = make_pipeline(o);
    std::vector<Invariant> found;
    if (pl.cl.kind == PdeClass::Parabolic) {
        found.push_back(family_invariant(pl, CharFamily::Parabolic, phi_text));
    } else if (pl.cl.kind == PdeClass::Hyperbolic) {
        found.push_back(family_invariant(pl, CharFamily::Plus, phi_text));
        found.push_back(family_invariant(pl, CharFamily::Minus, psi_text));
    } else {
        throw EngineError("characteristic invariants need real characteristics");
    }
    if (o.json) {
        OrderedJson arr = OrderedJson::array();
        for (const Invariant& inv : found) {
            const FirstOrderOp& op =
                inv.family == CharFamily::Minus ? pl.pair().minus : pl.pair().plus;
            arr.push_back(
                json_invariant(inv, verify_invariant(op, inv.phi, pl.vars, pl.region, pl.cfg)));
        }
        out << render_json(arr);
    } else {
        for (const Invariant& inv : found)
            out << char_family_name(inv.family) << ": " << pretty_text(inv.phi) << "  ["
                << provenance_name(inv.provenance) << "]\n";
    }
    return 0;
}

struct ReduceOpts {
    std::string method = "all";
    std::optional<std::string> phi, psi, inv_phi, inv_psi;
};

int cmd_reduce(const CommonOpts& o, const ReduceOpts& r, std::ostream& out) {
    Pipeline pl = make_pipeline(o);
    TransitionMap map = pipeline_map(pl, r.phi, r.psi, r.inv_phi, r.inv_psi);

    std::vector<CanonicalForm> forms;
    bool want_compact = r.method == "compact" || r.method == "all";
    bool want_chain = r.method == "chain" || r.method == "all";
    bool want_inverse = r.method == "inverse" || r.method == "all";
    if (want_compact) forms.push_back(reduce_compact(pl.p, pl.pair(), map, pl.region, pl.cfg));
    if (want_chain) forms.push_back(reduce_chain_rule(pl.p, map, pl.region, pl.cfg));
    if (want_inverse) {
        if (r.method == "inverse") {
            forms.push_back(reduce_inverse_map(pl.p, map, pl.region, pl.cfg));
        } else if (map.has_inverse() && !pl.pair().degenerate) {
            forms.push_back(reduce_inverse_map(pl.p, map, pl.region, pl.cfg));
        }
    }
    bool agree = forms.size() < 2 || cross_validate(forms, pl.vars, pl.region, pl.cfg);

    std::optional<InverseConditionReport> twins;
    if (map.has_inverse()) twins = inverse_condition_report(map, pl.region, pl.cfg);

    if (o.json) {
        OrderedJson j;
        j["map"] = json_map(map);
        OrderedJson arr = OrderedJson::array();
        for (const CanonicalForm& f : forms) arr.push_back(json_form(f));
        j["forms"] = arr;
        j["cross_validated"] = forms.size() < 2 ? OrderedJson(nullptr) : OrderedJson(agree);
        j["conditions"] = twins ? json_inverse_conditions(*twins) : OrderedJson(nullptr);
        out << render_json(j);
    } else {
        out << "xi  = " << pretty_text(map.phi) << "\n";
        out << "eta = " << pretty_text(map.psi) << "\n";
        for (const CanonicalForm& f : forms) print_form(out, f);
        if (forms.size() >= 2)
            out << (agree ? "methods agree" : "METHODS DISAGREE") << "\n";
    }
    return agree ? 0 : 1;
}

int cmd_solve(const CommonOpts& o, const ReduceOpts& r, std::ostream& out) {
    Pipeline pl = make_pipeline(o);
    TransitionMap map = pipeline_map(pl, r.phi, r.psi, r.inv_phi, r.inv_psi);
    CanonicalForm form = reduce_compact(pl.p, pl.pair(), map, pl.region, pl.cfg);
    std::optional<GeneralSolution> sol = solve_canonical(form, map, pl.region, pl.cfg);

    if (!sol) {
        if (o.json) {
            OrderedJson j;
            j["template_text"] = nullptr;
            j["certified"] = false;
            out << render_json(j);
        } else {
            out << "no closed-form template applies to the reduced equation\n";
        }
        return 1;
    }

    GeneralSolution down = pull_back(*sol, map);
    double worst = 0;
    bool certified = true;
    std::pair<ProbeFn, ProbeFn> probes[2] = {{ProbeFn::Sin, ProbeFn::Cos},
                                             {ProbeFn::Exp, ProbeFn::Square}};
    for (auto [f, g] : probes) {
        ResidualReport rr = residual(pl.p, instantiate(down, f, g), pl.region, pl.cfg);
        worst = std::max(worst, std::max(rr.symbolic.max_violation, rr.fd_max_violation));
        certified = certified && rr.ok();
    }

    if (o.json) {
        OrderedJson j;
        j["template_text"] = sol->text();
        j["rule"] = sol->rule;
        OrderedJson slots = OrderedJson::array();
        for (const SolutionTerm& t : sol->terms)
            slots.push_back(OrderedJson{{"coeff", pretty_text(t.coeff)},
                                        {"slot", std::string(1, t.slot)},
                                        {"arg", pretty_text(t.arg)}});
        j["slots"] = slots;
        j["base"] = sol->base ? OrderedJson(pretty_text(*sol->base)) : OrderedJson(nullptr);
        j["pulled_back_text"] = down.text();
        j["certified"] = certified;
        j["max_residual"] = number_text(worst);
        out << render_json(j);
    } else {
        out << "reduced equation: " << sol->rule << "\n";
        out << "U(xi, eta) = " << sol->text() << "\n";
        out << "u = " << down.text() << "\n";
        out << (certified ? "certified" : "NOT CERTIFIED") << ", worst residual violation "
            << number_text(worst) << "\n";
    }
    return certified ? 0 : 1;
}

int cmd_verify(const CommonOpts& o, const std::string& solution_text, std::ostream& out) {
    Pipeline pl = make_pipeline(o);
    Expr u = simplify(parse_expr(solution_text, pl.vars));
    ResidualReport rr = residual(pl.p, u, pl.region, pl.cfg);
    if (o.json) {
        out << render_json(json_residual(rr));
    } else {
        out << "symbolic residual: " << (rr.symbolic.equal ? "vanishes" : "DOES NOT VANISH")
            << " (max violation " << number_text(rr.symbolic.max_violation) << ")\n";
        out << "finite differences: " << (rr.fd_ok ? "agree" : "DISAGREE") << " (max violation "
            << number_text(rr.fd_max_violation) << ", " << rr.fd_excluded << "/" << rr.fd_samples
            << " excluded)\n";
    }
    return rr.ok() ? 0 : 1;
}

int cmd_corpus(const CommonOpts& o, const std::string& path, const std::string& only,
               bool list_only, std::ostream& out) {
    std::string resolved = path.empty() ? default_corpus_path() : path;
    std::vector<Fixture> all = load_corpus(resolved);
    if (list_only) {
        for (const Fixture& fx : all) out << fx.id << "\n";
        return 0;
    }

    OracleConfig cfg;
    if (o.seed_given) cfg.seed = o.seed;
    else if (const char* env = std::getenv("CHARACTERISTICA_SEED"); env && *env)
        cfg.seed = std::strtoull(env, nullptr, 10);
    if (o.tol_given) {
        cfg.tol_abs = o.tol;
        cfg.tol_rel = o.tol;
    }

    int failures = 0;
    int matched = 0;
    OrderedJson arr = OrderedJson::array();
    for (const Fixture& fx : all) {
        if (!only.empty() && fx.id != only) continue;
        ++matched;
        FixtureOutcome res = run_fixture(fx, cfg);
        if (!res.ok) ++failures;
        if (o.json) {
            arr.push_back(json_fixture_outcome(res));
        } else {
            out << (res.ok ? "ok    " : "FAIL  ") << res.id << "  ["
                << pde_class_name(res.classification.kind) << ", " << res.forms.size()
                << " methods]";
            if (res.solution) out << "  " << res.solution->rule;
            out << "\n";
            for (const std::string& m : res.messages) out << "      - " << m << "\n";
        }
    }
    if (!only.empty() && matched == 0) throw EngineError("no fixture named " + only);
    if (o.json) {
        OrderedJson j;
        j["corpus"] = resolved;
        j["fixtures"] = arr;
        j["failures"] = failures;
        out << render_json(j);
    } else {
        out << (failures == 0 ? "all fixtures pass" : "FAILURES: " + std::to_string(failures))
            << "\n";
    }
    return failures == 0 ? 0 : 1;
}

struct PlotOpts {
    std::string out_file = "plot.svg";
    std::string csv_file;
    int seeds = 3;
    double step = 1e-3;
    std::optional<std::string> phi, psi;
};

int cmd_plot(const CommonOpts& o, const PlotOpts& po, std::ostream& out) {
    Pipeline pl = make_pipeline(o);
    std::vector<CharacteristicOde> odes = char_odes(pl.pair(), pl.vars);
    std::vector<SamplePoint> seeds = seed_grid(pl.region, po.seeds);

    std::vector<CurveFamily> families;
    const std::optional<std::string>* user_texts[2] = {&po.phi, &po.psi};
    for (std::size_t k = 0; k < odes.size(); ++k) {
        std::optional<Expr> invariant;
        if (k < 2 && user_texts[k]->has_value())
            invariant = simplify(parse_expr(**user_texts[k], pl.vars));
        else if (std::optional<Invariant> solved =
                     solve_invariant(odes[k], pl.vars, pl.region, pl.cfg))
            invariant = solved->phi;
        CurveFamily fam;
        fam.name = char_family_name(odes[k].family);
        fam.curves =
            trace_curves(odes[k], pl.vars, seeds, pl.region, po.step, invariant, pl.cfg);
        families.push_back(std::move(fam));
    }

    if (o.json) {
        OrderedJson j;
        j["equation"] = pl.p.text;
        j["step"] = number_text(po.step);
        OrderedJson fams = OrderedJson::array();
        for (const CurveFamily& fam : families) {
            OrderedJson jf;
            jf["family"] = fam.name;
            OrderedJson curves = OrderedJson::array();
            for (const Curve& c : fam.curves) curves.push_back(json_curve(c, true));
            jf["curves"] = curves;
            fams.push_back(jf);
        }
        j["families"] = fams;
        out << render_json(j);
        return 0;
    }

    std::ofstream svg(po.out_file);
    if (!svg) throw EngineError("cannot write " + po.out_file);
    svg << curves_svg(families, pl.region, pl.vars, pl.p.text);
    out << "wrote " << po.out_file << "\n";
    if (!po.csv_file.empty()) {
        std::ofstream csv(po.csv_file);
        if (!csv) throw EngineError("cannot write " + po.csv_file);
        csv << curves_csv(families, pl.vars);
        out << "wrote " << po.csv_file << "\n";
    }
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"characteristic analysis of second-order linear equations in two variables"};
    app.require_subcommand(1);

    CommonOpts classify_o, factor_o, conditions_o, invariants_o, reduce_o, solve_o, verify_o,
        corpus_o, plot_o;
    ReduceOpts reduce_r, solve_r;
    PlotOpts plot_p;
    std::optional<std::string> cond_phi, cond_psi, inv_phi_opt, inv_psi_opt;
    std::string verify_solution, corpus_path, corpus_only;
    bool corpus_list = false;

    CLI::App* c_classify = app.add_subcommand("classify", "type and characteristic slopes");
    attach_common(c_classify, classify_o);

    CLI::App* c_factor = app.add_subcommand("factor", "first-order factors of the principal part");
    attach_common(c_factor, factor_o);

    CLI::App* c_conditions =
        app.add_subcommand("conditions", "commutation and residue conditions of the factors");
    attach_common(c_conditions, conditions_o);
    c_conditions->add_option("--phi", cond_phi, "plus-family invariant for the map-form check");
    c_conditions->add_option("--psi", cond_psi, "minus-family invariant for the map-form check");

    CLI::App* c_invariants =
        app.add_subcommand("invariants", "first integrals of the characteristic equations");
    attach_common(c_invariants, invariants_o);
    c_invariants->add_option("--phi", inv_phi_opt, "use this plus-family invariant");
    c_invariants->add_option("--psi", inv_psi_opt, "use this minus-family invariant");

    auto attach_reduce = [](CLI::App* cmd, ReduceOpts& r) {
        cmd->add_option("--method", r.method, "compact | chain | inverse | all")
            ->check(CLI::IsMember({"compact", "chain", "inverse", "all"}));
        cmd->add_option("--phi", r.phi, "plus-family (or parabolic) invariant");
        cmd->add_option("--psi", r.psi, "minus-family invariant / parabolic completion");
        cmd->add_option("--inv-phi", r.inv_phi, "first source variable in terms of xi,eta");
        cmd->add_option("--inv-psi", r.inv_psi, "second source variable in terms of xi,eta");
    };

    CLI::App* c_reduce = app.add_subcommand("reduce", "canonical form by independent methods");
    attach_common(c_reduce, reduce_o);
    attach_reduce(c_reduce, reduce_r);

    CLI::App* c_solve = app.add_subcommand("solve", "closed-form template for the reduced equation");
    attach_common(c_solve, solve_o);
    attach_reduce(c_solve, solve_r);

    CLI::App* c_verify = app.add_subcommand("verify", "check a candidate solution's residual");
    attach_common(c_verify, verify_o);
    c_verify->add_option("--solution", verify_solution, "candidate u as an expression")
        ->required();

    CLI::App* c_corpus = app.add_subcommand("corpus", "run the pinned example corpus");
    c_corpus->add_option("id", corpus_only, "run a single fixture");
    c_corpus->add_option("--file", corpus_path, "corpus json path");
    c_corpus->add_flag("--list", corpus_list, "list fixture ids");
    c_corpus->add_option("--seed", corpus_o.seed, "sampling seed");
    c_corpus->add_option("--tol", corpus_o.tol, "oracle tolerance");
    c_corpus->add_flag("--json", corpus_o.json, "machine-readable output");

    CLI::App* c_plot = app.add_subcommand("plot", "trace and draw the characteristic families");
    attach_common(c_plot, plot_o);
    c_plot->add_option("--out", plot_p.out_file, "svg output path");
    c_plot->add_option("--csv", plot_p.csv_file, "also dump traced points as csv");
    c_plot->add_option("--seeds", plot_p.seeds, "seeds per side of the grid")
        ->check(CLI::Range(1, 16));
    c_plot->add_option("--step", plot_p.step, "arc-length step");
    c_plot->add_option("--phi", plot_p.phi, "invariant whose drift is tracked (first family)");
    c_plot->add_option("--psi", plot_p.psi, "invariant whose drift is tracked (second family)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    note_overrides(c_classify, classify_o);
    note_overrides(c_factor, factor_o);
    note_overrides(c_conditions, conditions_o);
    note_overrides(c_invariants, invariants_o);
    note_overrides(c_reduce, reduce_o);
    note_overrides(c_solve, solve_o);
    note_overrides(c_verify, verify_o);
    note_overrides(c_corpus, corpus_o);
    note_overrides(c_plot, plot_o);

    try {
        if (c_classify->parsed()) return cmd_classify(classify_o, out);
        if (c_factor->parsed()) return cmd_factor(factor_o, out);
        if (c_conditions->parsed()) return cmd_conditions(conditions_o, cond_phi, cond_psi, out);
        if (c_invariants->parsed())
            return cmd_invariants(invariants_o, inv_phi_opt, inv_psi_opt, out);
        if (c_reduce->parsed()) return cmd_reduce(reduce_o, reduce_r, out);
        if (c_solve->parsed()) return cmd_solve(solve_o, solve_r, out);
        if (c_verify->parsed()) return cmd_verify(verify_o, verify_solution, out);
        if (c_corpus->parsed())
            return cmd_corpus(corpus_o, corpus_path, corpus_only, corpus_list, out);
        if (c_plot->parsed()) return cmd_plot(plot_o, plot_p, out);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const EngineError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "no subcommand\n";
    return 2;
}

}  // namespace characteristica
