// Times the sampling kernels that back the numeric oracles, once with the
// serial reference and once with the OpenMP variant, on the same workloads
// the engine actually runs: dense oracle scans of expression trees and the
// nine-point finite-difference residual of a verified solution. Verdicts are
// checked to agree across modes before any timing is believed.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "characteristica/solutions.hpp"

using namespace characteristica;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_of(const std::function<void()>& body, int reps) {
    // one warm-up, then the best of `reps` to dampen scheduler noise
    body();
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        auto t0 = Clock::now();
        body();
        double s = std::chrono::duration<double>(Clock::now() - t0).count();
        if (s < best) best = s;
    }
    return best;
}

struct Workload {
    std::string name;
    double serial_s = 0, openmp_s = 0;
    bool agree = true;
};

void report(const Workload& w) {
    std::printf("%-28s serial %9.3f ms   openmp %9.3f ms   speedup %5.2fx   %s\n",
                w.name.c_str(), w.serial_s * 1e3, w.openmp_s * 1e3,
                w.serial_s / w.openmp_s, w.agree ? "verdicts agree" : "VERDICTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
    int samples = argc > 1 ? std::atoi(argv[1]) : 4096;
    int reps = argc > 2 ? std::atoi(argv[2]) : 5;
    if (samples <= 0 || reps <= 0) {
        std::fprintf(stderr, "usage: bench_sampling [samples] [reps]\n");
        return 2;
    }
    std::printf("samples per scan: %d, reps: %d (best-of)\n", samples, reps);

    VarPair vars{"x", "y"};
    SampleRegion region{Rational(1), Rational(2), Rational(1), Rational(2), {}};

    // oracle scan: the operator identity P[phi] - A*L-[lambda+]*phi_2 on the
    // non-commuting fixture, the densest expression tree the corpus produces
    Pde2 p = parse_pde("x*u_xx + (x - y)*u_xy - y*u_yy = 0", vars);
    Classification cl = classify(p, region, OracleConfig{});
    LambdaPair lam = lambdas(p, cl.kind, region, OracleConfig{});
    FactorPair pair = factor_principal(p, lam, cl.kind);
    Expr phi = simplify(parse_expr("x*y", vars));
    Expr probe = simplify(sub(principal_apply(p, phi),
                              mul(pair.leading, mul(pair.residue_minus, diff(phi, vars.second)))));

    std::vector<Workload> table;

    {
        Workload w{"oracle scan (equiv_zero)", 0, 0, true};
        bool verdict_serial = false, verdict_openmp = false;
        auto scan = [&](par::Mode mode, bool& verdict) {
            OracleConfig cfg;
            cfg.samples = samples;
            cfg.mode = mode;
            verdict = equiv_zero(probe, vars, region, cfg);
        };
        w.serial_s = seconds_of([&] { scan(par::Mode::Serial, verdict_serial); }, reps);
        w.openmp_s = seconds_of([&] { scan(par::Mode::OpenMP, verdict_openmp); }, reps);
        w.agree = verdict_serial == verdict_openmp;
        table.push_back(w);
        report(w);
    }

    {
        // finite-difference residual of a certified solution: 9 guarded
        // evaluations per sample point
        Expr u = simplify(parse_expr("2*(x + y) + cos(x - y)", vars));
        Workload w{"fd residual (9-point)", 0, 0, true};
        bool ok_serial = false, ok_openmp = false;
        auto scan = [&](par::Mode mode, bool& ok) {
            OracleConfig cfg;
            cfg.samples = samples;
            cfg.mode = mode;
            ok = residual(p, u, region, cfg).ok();
        };
        w.serial_s = seconds_of([&] { scan(par::Mode::Serial, ok_serial); }, reps);
        w.openmp_s = seconds_of([&] { scan(par::Mode::OpenMP, ok_openmp); }, reps);
        w.agree = ok_serial == ok_openmp;
        table.push_back(w);
        report(w);
    }

    {
        // raw reduction on a cheap metric: measures the harness floor
        Workload w{"max_metric floor", 0, 0, true};
        std::size_t n = static_cast<std::size_t>(samples) * 64;
        auto scan = [&](par::Mode mode) {
            return par::max_metric(
                n, [](std::size_t i) { return static_cast<double>(i % 977) * 1e-3; }, mode);
        };
        double a = 0, b = 0;
        w.serial_s = seconds_of([&] { a = scan(par::Mode::Serial); }, reps);
        w.openmp_s = seconds_of([&] { b = scan(par::Mode::OpenMP); }, reps);
        w.agree = a == b;
        table.push_back(w);
        report(w);
    }

    for (const Workload& w : table)
        if (!w.agree) {
            std::fprintf(stderr, "mode disagreement in %s\n", w.name.c_str());
            return 1;
        }
    return 0;
}
