#pragma once

#include <array>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "characteristica/rational.hpp"

namespace characteristica {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EngineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class NodeKind {
    Number,      // exact rational constant
    Symbol,      // named variable
    Sum,         // a + b
    Difference,  // a - b
    Product,     // a * b
    Quotient,    // a / b
    Negate,      // -a
    Power,       // a ^ (p/q), exponent is always an exact rational
    Call,        // builtin(a)
};

enum class Builtin { Exp, Ln, Sqrt, Sinh, Cosh, Tanh, Sin, Cos };

[[nodiscard]] const char* builtin_name(Builtin f);
[[nodiscard]] std::optional<Builtin> builtin_from_name(const std::string& name);

struct Node;
using Expr = std::shared_ptr<const Node>;

// Immutable expression tree node. Sharing subtrees is safe; nothing mutates
// a node after construction.
struct Node {
    NodeKind kind = NodeKind::Number;
    Rational value{};           // Number
    std::string name{};         // Symbol
    Builtin fn = Builtin::Exp;  // Call
    Rational exponent{};        // Power
    Expr a{}, b{};              // operands (b unused for unary kinds)
};

// The ordered variable pair an expression is read against. Order matters:
// the first variable plays the role x plays in the canonical equations.
struct VarPair {
    std::string first = "x";
    std::string second = "y";
    [[nodiscard]] int index_of(const std::string& n) const {
        if (n == first) return 0;
        if (n == second) return 1;
        return -1;
    }
    [[nodiscard]] bool operator==(const VarPair& o) const {
        return first == o.first && second == o.second;
    }
};

[[nodiscard]] inline VarPair target_vars() { return VarPair{"xi", "eta"}; }

// ---- raw constructors (no folding; parser and tests use these) ----
[[nodiscard]] Expr number(Rational v);
[[nodiscard]] Expr number(std::int64_t v);
[[nodiscard]] Expr symbol(std::string name);
[[nodiscard]] Expr sum_node(Expr a, Expr b);
[[nodiscard]] Expr difference_node(Expr a, Expr b);
[[nodiscard]] Expr product_node(Expr a, Expr b);
[[nodiscard]] Expr quotient_node(Expr a, Expr b);
[[nodiscard]] Expr negate_node(Expr a);
[[nodiscard]] Expr power_node(Expr base, Rational exponent);
[[nodiscard]] Expr call_node(Builtin f, Expr arg);

// ---- smart builders (light local folding; differentiation uses these) ----
[[nodiscard]] Expr add(Expr a, Expr b);
[[nodiscard]] Expr sub(Expr a, Expr b);
[[nodiscard]] Expr mul(Expr a, Expr b);
[[nodiscard]] Expr div(Expr a, Expr b);
[[nodiscard]] Expr neg(Expr a);
[[nodiscard]] Expr powr(Expr base, Rational exponent);
[[nodiscard]] Expr call(Builtin f, Expr arg);

// ---- queries ----
[[nodiscard]] bool structural_equal(const Expr& a, const Expr& b);
[[nodiscard]] bool contains_symbol(const Expr& e, const std::string& name);
[[nodiscard]] std::optional<Rational> rational_constant(const Expr& e);
[[nodiscard]] bool is_zero_literal(const Expr& e);

// Top-level additive terms of e (through sums, differences and negations).
// Used by the sampling oracle to derive a magnitude scale at each point.
[[nodiscard]] std::vector<Expr> top_terms(const Expr& e);

// Multiplicative view of a single term: rational coefficient times factors
// with rational exponents. Walks products, quotients, negations, powers and
// sqrt; does not rewrite anything else.
struct FactorView {
    Expr base;
    Rational exp;
};
struct TermView {
    Rational coeff{1};
    std::vector<FactorView> factors;
};
[[nodiscard]] TermView term_view(const Expr& term);

// ---- evaluation ----
// Numeric value of e at (first, second) = (v1, v2); empty on a domain fault
// (division by zero, log/root of a non-positive value, non-finite result).
[[nodiscard]] std::optional<double> eval_checked(const Expr& e, const VarPair& vars,
                                                 double v1, double v2);

// ---- printing ----
// Fully parenthesized form; parse(canonical_text(e)) rebuilds e node for node.
[[nodiscard]] std::string canonical_text(const Expr& e);
// Precedence-aware form for reports.
[[nodiscard]] std::string pretty_text(const Expr& e);

// ---- parsing ----
// Grammar: + - * / ^, unary minus, parentheses, calls of the builtin
// functions, integer/decimal literals (read exactly as rationals), and
// identifiers restricted to `vars` plus `extra` names. '^' requires an
// exponent that folds to a rational constant.
[[nodiscard]] Expr parse_expr(const std::string& text, const VarPair& vars,
                              const std::vector<std::string>& extra = {});

// ---- calculus / rewriting ----
[[nodiscard]] Expr diff(const Expr& e, const std::string& var);
[[nodiscard]] Expr substitute(const Expr& e, const std::string& name, const Expr& repl);
// Simultaneous substitution of both names (composition with a map).
[[nodiscard]] Expr substitute_pair(const Expr& e, const std::string& n1, const Expr& r1,
                                   const std::string& n2, const Expr& r2);

// Light normalization: exact constant folding, 0/1 identities, flattening of
// nested sums/products, combining structurally identical terms and factors.
// No expansion of products of sums. May widen the domain (x/x -> 1), which is
// acceptable for oracle work on guarded regions.
[[nodiscard]] Expr simplify(const Expr& e);

// Subexpressions that must stay away from zero for e to be well defined:
// denominators (nonzero) and ln/sqrt/fractional-power arguments (positive).
struct DomainGuard {
    Expr expr;
    bool positive;  // true: expr must stay >= eps; false: |expr| >= eps
};
[[nodiscard]] std::vector<DomainGuard> collect_guards(const Expr& e);

}  // namespace characteristica
