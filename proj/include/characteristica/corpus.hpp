#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "characteristica/solutions.hpp"

namespace characteristica {

// A worked example from data/corpus.json: the equation, where to sample it,
// and every value the engine is expected to reproduce.
struct FixtureInvariant {
    std::string text;
    bool user = false;  // supplied from outside the engine (solver declines)
};

// Extra operator evaluations pinned by the fixture, e.g. {"P", "phi", "x - y"}
// says applying the principal part to phi must equal x - y on the region.
struct FixtureOperatorCheck {
    std::string op;   // "P" | "L+" | "L-"
    std::string arg;  // "phi" | "psi"
    std::string equals;
};

struct FixtureConditions {
    std::optional<bool> commutes, residue_free_minus, residue_free_plus;
    std::optional<std::string> r_minus, r_plus;
    std::optional<std::string> lambda_residue;  // parabolic L[Lambda]
    std::optional<bool> lambda_residue_zero;
};

struct FixtureSolution {
    std::string rule;  // expected catalog rule, empty when none should fire
    std::vector<std::string> particular;  // closed forms to residual-check
};

struct Fixture {
    std::string id;
    std::string pde;
    VarPair vars;
    SampleRegion region;
    std::string expect_class;
    std::optional<std::string> lambda_plus, lambda_minus, lambda_repeated;
    std::optional<FixtureInvariant> phi, psi;
    // build the transition map from the listed texts instead of the solved
    // invariants (needed whenever the inverse pair is keyed to those texts)
    bool map_from_supplied = false;
    std::optional<std::pair<std::string, std::string>> inverse;
    FixtureConditions conditions;
    std::map<std::string, std::string> canonical;  // slot name -> text in (xi, eta)
    std::vector<FixtureOperatorCheck> operator_checks;
    FixtureSolution solution;
    std::string notes;
};

// CHARACTERISTICA_CORPUS env var, else ./data/corpus.json, else the copy next
// to the sources.
[[nodiscard]] std::string default_corpus_path();
[[nodiscard]] std::vector<Fixture> load_corpus(const std::string& path);
[[nodiscard]] const Fixture& find_fixture(const std::vector<Fixture>& all, const std::string& id);

// Everything the engine produced for one fixture, with per-stage verdicts
// against the pinned expectations. `ok` is the conjunction.
struct FixtureOutcome {
    std::string id;
    Pde2 pde;
    Classification classification;
    LambdaPair lam;
    FactorPair pair;
    bool class_ok = false;
    bool lambda_ok = true;

    std::optional<bool> solved_phi_equivalent, solved_psi_equivalent;
    TransitionMap map;

    std::optional<CommutatorReport> commutator;
    std::optional<Expr> lambda_residue;
    std::optional<InverseConditionReport> inverse_conditions;
    bool conditions_ok = true;

    std::vector<CanonicalForm> forms;  // compact, chain-rule[, inverse-map]
    bool cross_validated = false;
    bool canonical_ok = true;

    std::optional<GeneralSolution> solution;  // target coordinates
    bool rule_ok = true;
    bool probes_ok = true;
    bool particular_ok = true;
    double worst_residual = 0.0;  // max violation over all residual checks

    bool operator_checks_ok = true;
    bool ok = false;
    std::vector<std::string> messages;
};

[[nodiscard]] FixtureOutcome run_fixture(const Fixture& fx, const OracleConfig& cfg);

// Compare a reduced form against the fixture's expected canonical slots,
// cross-multiplied with the leading slot so the overall scale drops out:
// got_s * E_lead == E_s * got_lead on the region for every slot, with the
// expected texts rendered back into source coordinates through the map.
[[nodiscard]] bool canonical_matches(const CanonicalForm& form, const TransitionMap& map,
                                     const std::map<std::string, std::string>& expected,
                                     const SampleRegion& region, const OracleConfig& cfg);

}  // namespace characteristica
