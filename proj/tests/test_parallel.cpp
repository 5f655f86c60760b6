// The OpenMP kernels must be drop-in replacements for the serial reference:
// same verdicts, bit-identical metrics, regardless of schedule.
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "characteristica/solutions.hpp"

using namespace characteristica;

namespace {
const VarPair kXY{"x", "y"};
const SampleRegion kPos{Rational(1, 2), Rational(2), Rational(1, 2), Rational(2), {}};

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }
}  // namespace

TEST_CASE("max and min reductions agree bitwise across modes") {
    auto f = [](std::size_t i) {
        double x = static_cast<double>(i) * 0.1;
        return std::sin(x) * std::exp(-x / 100.0);
    };
    for (std::size_t n : {std::size_t{1}, std::size_t{17}, std::size_t{1000}}) {
        CHECK(bit_equal(par::max_metric(n, f, par::Mode::Serial),
                        par::max_metric(n, f, par::Mode::OpenMP)));
        CHECK(bit_equal(par::min_metric(n, f, par::Mode::Serial),
                        par::min_metric(n, f, par::Mode::OpenMP)));
    }
}

TEST_CASE("a faulting sample dominates the reduction in both modes") {
    auto f = [](std::size_t i) {
        return i == 313 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
    };
    double s = par::max_metric(1000, f, par::Mode::Serial);
    double o = par::max_metric(1000, f, par::Mode::OpenMP);
    CHECK(std::isinf(s));
    CHECK(bit_equal(s, o));
}

TEST_CASE("empty ranges reduce to the identity element") {
    auto f = [](std::size_t) { return 1.0; };
    CHECK(par::max_metric(0, f, par::Mode::Serial) ==
          -std::numeric_limits<double>::infinity());
    CHECK(bit_equal(par::max_metric(0, f, par::Mode::Serial),
                    par::max_metric(0, f, par::Mode::OpenMP)));
}

TEST_CASE("indexed for-each writes every slot exactly once in both modes") {
    std::vector<double> serial(257, -1), openmp(257, -1);
    par::for_each_index(serial.size(), [&](std::size_t i) { serial[i] = std::sqrt(double(i)); },
                        par::Mode::Serial);
    par::for_each_index(openmp.size(), [&](std::size_t i) { openmp[i] = std::sqrt(double(i)); },
                        par::Mode::OpenMP);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i] >= 0);
        CHECK(bit_equal(serial[i], openmp[i]));
    }
}

TEST_CASE("oracle reports are bit-identical across modes") {
    Expr e = parse_expr("(x + y)^3 - x^3 - 3*x^2*y - 3*x*y^2 - y^3 + 1/100000000", kXY);
    OracleConfig serial;
    serial.mode = par::Mode::Serial;
    OracleConfig openmp;
    openmp.mode = par::Mode::OpenMP;
    EquivReport a = equiv_zero_report(e, kXY, kPos, serial);
    EquivReport b = equiv_zero_report(e, kXY, kPos, openmp);
    CHECK(a.equal == b.equal);
    CHECK(bit_equal(a.max_violation, b.max_violation));
    CHECK(bit_equal(a.max_abs, b.max_abs));
    CHECK(bit_equal(a.worst.a, b.worst.a));
    CHECK(bit_equal(a.worst.b, b.worst.b));
    CHECK(a.samples == b.samples);
}

TEST_CASE("finite-difference residuals are bit-identical across modes") {
    Pde2 p = parse_pde("x*u_xx + (x - y)*u_xy - y*u_yy = 0", kXY);
    SampleRegion reg{Rational(1), Rational(2), Rational(1), Rational(2), {}};
    Expr u = parse_expr("2*(x + y) + cos(x - y)", kXY);
    OracleConfig serial;
    serial.mode = par::Mode::Serial;
    OracleConfig openmp;
    openmp.mode = par::Mode::OpenMP;
    ResidualReport a = residual(p, u, reg, serial);
    ResidualReport b = residual(p, u, reg, openmp);
    CHECK(a.ok() == b.ok());
    CHECK(bit_equal(a.fd_max_violation, b.fd_max_violation));
    CHECK(bit_equal(a.fd_max_abs, b.fd_max_abs));
    CHECK(a.fd_samples == b.fd_samples);
    CHECK(a.fd_excluded == b.fd_excluded);
    CHECK(bit_equal(a.symbolic.max_violation, b.symbolic.max_violation));
}

TEST_CASE("default mode matches the build configuration") {
#ifdef CHARACTERISTICA_HAVE_OPENMP
    CHECK(par::default_mode() == par::Mode::OpenMP);
#else
    CHECK(par::default_mode() == par::Mode::Serial);
#endif
}
