#pragma once

#include <string>

#include "json.hpp"

#include "characteristica/corpus.hpp"

namespace characteristica {

// Reports keep insertion order and render floating-point metrics through
// number_text, so identical inputs and seeds serialize byte for byte.
using OrderedJson = nlohmann::ordered_json;

[[nodiscard]] std::string number_text(double v);  // %.17g
[[nodiscard]] std::string render_json(const OrderedJson& j);  // 2-space indent + newline

[[nodiscard]] OrderedJson json_classify(const Pde2& p, const Classification& c,
                                        const LambdaPair& lam);
[[nodiscard]] OrderedJson json_factor(const FactorPair& pair);
[[nodiscard]] OrderedJson json_conditions(const CommutatorReport& cr);
[[nodiscard]] OrderedJson json_parabolic_condition(const Expr& residue, bool zero);
[[nodiscard]] OrderedJson json_invariant(const Invariant& inv, bool verified);
[[nodiscard]] OrderedJson json_map(const TransitionMap& map);
[[nodiscard]] OrderedJson json_form(const CanonicalForm& form);
[[nodiscard]] OrderedJson json_inverse_conditions(const InverseConditionReport& rep);
[[nodiscard]] OrderedJson json_solution(const GeneralSolution& sol);
[[nodiscard]] OrderedJson json_residual(const ResidualReport& rr);
[[nodiscard]] OrderedJson json_curve(const Curve& c, bool include_points);
[[nodiscard]] OrderedJson json_fixture_outcome(const FixtureOutcome& out);

}  // namespace characteristica
