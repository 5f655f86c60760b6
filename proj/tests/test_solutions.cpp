#include "doctest.h"

#include "characteristica/solutions.hpp"

using namespace characteristica;

namespace {
const VarPair kXY{"x", "y"};
const OracleConfig kCfg{};
const SampleRegion kPos{Rational(1, 2), Rational(2), Rational(1, 2), Rational(2), {}};

struct Reduced {
    Pde2 p;
    FactorPair pair;
    TransitionMap map;
    CanonicalForm form;
    SampleRegion reg;
};

Reduced reduce(const std::string& text, const VarPair& vars, const SampleRegion& reg,
               const Expr& phi, const std::optional<Expr>& psi,
               const std::optional<std::pair<Expr, Expr>>& inverse) {
    Pde2 p = parse_pde(text, vars);
    Classification cl = classify(p, reg, kCfg);
    FactorPair pair = factor_principal(p, lambdas(p, cl.kind, reg, kCfg), cl.kind);
    TransitionMap map =
        cl.kind == PdeClass::Parabolic
            ? build_map_parabolic(p, pair,
                                  Invariant{simplify(phi), CharFamily::Parabolic,
                                            Provenance::UserSupplied},
                                  psi, inverse, reg, kCfg)
            : build_map(p, pair,
                        Invariant{simplify(phi), CharFamily::Plus, Provenance::UserSupplied},
                        Invariant{simplify(*psi), CharFamily::Minus, Provenance::UserSupplied},
                        inverse, reg, kCfg);
    CanonicalForm form = reduce_compact(p, pair, map, reg, kCfg);
    return Reduced{p, pair, map, form, reg};
}

// every template must survive residual checking under two independent
// instantiations of its arbitrary functions
void certify(const Reduced& r, const GeneralSolution& sol) {
    GeneralSolution down = pull_back(sol, r.map);
    std::pair<ProbeFn, ProbeFn> probes[2] = {{ProbeFn::Sin, ProbeFn::Cos},
                                             {ProbeFn::Exp, ProbeFn::Square}};
    for (auto [f, g] : probes) {
        ResidualReport rr = residual(r.p, instantiate(down, f, g), r.reg, kCfg);
        CHECK_MESSAGE(rr.ok(), sol.rule);
    }
}
}  // namespace

TEST_CASE("vanishing mixed slot splits into one function of each coordinate") {
    SampleRegion reg{Rational(1, 2), Rational(2), Rational(-1), Rational(1), {}};
    Reduced r = reduce(
        "8*sinh(x/2)^2*u_xx - 4*exp(y/2)*sinh(x)*u_xy + 2*exp(y)*u_yy + "
        "(2*exp(y/2) + exp(y))*u_y = 0",
        kXY, reg, parse_expr("ln(exp(x) - 1) - 2*exp(-y/2)", kXY),
        parse_expr("ln(exp(x) - 1) - 2*exp(-y/2) - x", kXY), std::nullopt);
    std::optional<GeneralSolution> sol = solve_canonical(r.form, r.map, r.reg, kCfg);
    REQUIRE(sol.has_value());
    CHECK(sol->rule == "U_12 = 0");
    REQUIRE(sol->terms.size() == 2);
    CHECK_FALSE(sol->base.has_value());
    certify(r, *sol);
}

TEST_CASE("first-order feedback picks up an exponential weight") {
    Reduced r = reduce("u_xy + 2*x*u_yy = u_y", kXY, kPos, parse_expr("y - x^2", kXY),
                       parse_expr("x", kXY), std::nullopt);
    std::optional<GeneralSolution> sol = solve_canonical(r.form, r.map, r.reg, kCfg);
    REQUIRE(sol.has_value());
    CHECK(sol->rule == "U_12 = U_1");
    CHECK(sol->text().find("exp(eta)") != std::string::npos);
    certify(r, *sol);
}

TEST_CASE("euler-type mixed equations take an inverse square root weight") {
    VarPair tx{"t", "x"};
    SampleRegion reg{Rational(1), Rational(2), Rational(1), Rational(2), {}};
    auto inverse = std::make_pair(parse_expr("sqrt(xi/eta)", target_vars()),
                                  parse_expr("sqrt(xi^3/eta)", target_vars()));
    Reduced r = reduce("t^2*u_tt + 4*t*x*u_tx + 3*x^2*u_xx = 0", tx, reg,
                       parse_expr("x/t", tx), parse_expr("x/t^3", tx), inverse);
    std::optional<GeneralSolution> sol = solve_canonical(r.form, r.map, r.reg, kCfg);
    REQUIRE(sol.has_value());
    CHECK(sol->rule == "2*eta*U_12 + U_1 = 0");
    CHECK(sol->text().find("eta^(-1/2)") != std::string::npos);
    certify(r, *sol);
}

TEST_CASE("plain repeated-factor equations are linear in the second coordinate") {
    Reduced r = reduce("x^2*u_xx + 2*x*y*u_xy + y^2*u_yy = 0", kXY, kPos,
                       parse_expr("y/x", kXY), std::nullopt, std::nullopt);
    std::optional<GeneralSolution> sol = solve_canonical(r.form, r.map, r.reg, kCfg);
    REQUIRE(sol.has_value());
    CHECK(sol->rule == "U_22 = 0");
    certify(r, *sol);
}

TEST_CASE("a first-order echo in the parabolic reduction gives a square weight") {
    SampleRegion reg{Rational(1, 2), Rational(2), Rational(1, 2), Rational(2), {}};
    auto inverse = std::make_pair(parse_expr("eta", target_vars()),
                                  parse_expr("sqrt(xi - eta^2)", target_vars()));
    Reduced r = reduce("x*y^3*u_xx - 2*x^2*y^2*u_xy + x^3*y*u_yy = y^3*u_x + x^3*u_y", kXY, reg,
                       parse_expr("x^2 + y^2", kXY), std::nullopt, inverse);
    std::optional<GeneralSolution> sol = solve_canonical(r.form, r.map, r.reg, kCfg);
    REQUIRE(sol.has_value());
    CHECK(sol->rule == "eta*U_22 = U_2");
    CHECK(sol->text().find("eta^2") != std::string::npos);
    certify(r, *sol);
}

TEST_CASE("pure second-coordinate forcing integrates to a particular term") {
    VarPair yx{"y", "x"};
    SampleRegion reg{Rational(1, 2), Rational(2), Rational(-1), Rational(1), {}};
    auto inverse = std::make_pair(parse_expr("eta", target_vars()),
                                  parse_expr("xi - eta^2/2", target_vars()));
    Reduced r = reduce("y^2*u_xx - 2*y*u_xy + u_yy = u_x + 6*y", yx, reg,
                       parse_expr("x + y^2/2", yx), std::nullopt, inverse);
    std::optional<GeneralSolution> sol = solve_canonical(r.form, r.map, r.reg, kCfg);
    REQUIRE(sol.has_value());
    CHECK(sol->rule == "U_22 = r(eta)");
    REQUIRE(sol->base.has_value());
    // B'' = 6 eta integrates to eta^3
    CHECK(oracle_equal(*sol->base, parse_expr("eta^3", target_vars()), target_vars(),
                       SampleRegion{Rational(1, 2), Rational(2), Rational(1, 2), Rational(2), {}},
                       kCfg));
    certify(r, *sol);

    // the pulled-back particular term alone satisfies the full equation
    GeneralSolution down = pull_back(*sol, r.map);
    REQUIRE(down.base.has_value());
    ResidualReport rr = residual(r.p, *down.base, r.reg, kCfg);
    CHECK(rr.ok());
}

TEST_CASE("the catalog declines equations it has no template for") {
    VarPair tx{"t", "x"};
    SampleRegion reg{Rational(1), Rational(2), Rational(-2), Rational(-1), {}};
    Reduced r = reduce("u_tt + 4*t*u_tx + 3*t^2*u_xx = 0", tx, reg,
                       parse_expr("x - t^2/2", tx), parse_expr("x - 3*t^2/2", tx), std::nullopt);
    CHECK_FALSE(solve_canonical(r.form, r.map, r.reg, kCfg).has_value());
}

TEST_CASE("travelling-wave splitting handles constant coefficients") {
    Pde2 p = parse_pde("u_xx - u_yy = 0", kXY);
    SampleRegion reg{Rational(0), Rational(1), Rational(0), Rational(1), {}};
    std::optional<GeneralSolution> sol = dalembert(p, reg, kCfg);
    REQUIRE(sol.has_value());
    REQUIRE(sol->terms.size() == 2);
    CHECK(sol->coords == kXY);
    for (ProbeFn f : {ProbeFn::Sin, ProbeFn::Exp}) {
        ResidualReport rr = residual(p, instantiate(*sol, f, ProbeFn::Cos), reg, kCfg);
        CHECK(rr.ok());
    }
}

TEST_CASE("travelling-wave splitting declines variable coefficients and forcing") {
    SampleRegion reg{Rational(1), Rational(2), Rational(1), Rational(2), {}};
    CHECK_FALSE(dalembert(parse_pde("x*u_xx + (x - y)*u_xy - y*u_yy = 0", kXY), reg, kCfg)
                    .has_value());
    CHECK_FALSE(dalembert(parse_pde("u_xx - u_yy = 1", kXY), reg, kCfg).has_value());
    CHECK_FALSE(dalembert(parse_pde("u_xx + u_yy = 0", kXY), reg, kCfg).has_value());
}

TEST_CASE("degenerate travelling waves ride the first coordinate") {
    Pde2 p = parse_pde("u_xy + u_yy = 0", kXY);
    SampleRegion reg{Rational(0), Rational(1), Rational(0), Rational(1), {}};
    std::optional<GeneralSolution> sol = dalembert(p, reg, kCfg);
    REQUIRE(sol.has_value());
    bool saw_plain_x = false;
    for (const SolutionTerm& t : sol->terms)
        if (oracle_equal(t.arg, parse_expr("x", kXY), kXY, reg, kCfg)) saw_plain_x = true;
    CHECK(saw_plain_x);
    ResidualReport rr = residual(p, instantiate(*sol, ProbeFn::Sin, ProbeFn::Cos), reg, kCfg);
    CHECK(rr.ok());
}

TEST_CASE("the residual judge rejects wrong candidates on both channels") {
    Pde2 p = parse_pde("x*u_xx + (x - y)*u_xy - y*u_yy = 0", kXY);
    SampleRegion reg{Rational(1), Rational(2), Rational(1), Rational(2), {}};
    ResidualReport good = residual(p, parse_expr("2*(x + y) + cos(x - y)", kXY), reg, kCfg);
    CHECK(good.ok());
    CHECK(good.symbolic_ok);
    CHECK(good.fd_ok);
    CHECK(good.fd_samples == kCfg.samples);

    ResidualReport bad = residual(p, parse_expr("x^2 + y", kXY), reg, kCfg);
    CHECK_FALSE(bad.ok());
    CHECK_FALSE(bad.symbolic_ok);
    CHECK_FALSE(bad.fd_ok);
    CHECK(bad.fd_max_violation > 1);
}

TEST_CASE("residual checking survives nested radicals") {
    VarPair tx{"t", "x"};
    SampleRegion reg{Rational(1), Rational(2), Rational(-2), Rational(-1), {}};
    Pde2 p = parse_pde("u_tt + 4*t*u_tx + 3*t^2*u_xx = 0", tx);
    Expr u = parse_expr("1 + t + x + t^4 - 2*x^2 + ((3*t^2 - 2*x)/(t^2 - 2*x)^3)^(1/4)", tx);
    ResidualReport rr = residual(p, u, reg, kCfg);
    CHECK(rr.ok());
    CHECK(rr.fd_excluded * 2 < rr.fd_samples);
}

TEST_CASE("solution text renders the template faithfully") {
    Reduced r = reduce("u_xy + 2*x*u_yy = u_y", kXY, kPos, parse_expr("y - x^2", kXY),
                       parse_expr("x", kXY), std::nullopt);
    std::optional<GeneralSolution> sol = solve_canonical(r.form, r.map, r.reg, kCfg);
    REQUIRE(sol.has_value());
    CHECK(sol->text() == "exp(eta)*F(xi) + G(eta)");
    GeneralSolution down = pull_back(*sol, r.map);
    CHECK(down.text() == "exp(x)*F(-x^2 + y) + G(x)");
    CHECK(down.coords == kXY);
}
