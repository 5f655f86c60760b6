#include "characteristica/oracle.hpp"

#include <cmath>
#include <random>

namespace characteristica {

namespace {

// Uniform double in [0,1) from raw generator bits; the standard distributions
// are implementation-defined, this is reproducible everywhere.
[[nodiscard]] double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

[[nodiscard]] bool guard_ok(const DomainGuard& g, const VarPair& vars, double a, double b,
                            double eps) {
    auto v = eval_checked(g.expr, vars, a, b);
    if (!v) return false;
    return g.positive ? *v >= eps : std::fabs(*v) >= eps;
}

}  // namespace

std::vector<SamplePoint> draw_samples(const VarPair& vars, const SampleRegion& region,
                                      const OracleConfig& cfg,
                                      const std::vector<DomainGuard>& extra) {
    std::mt19937_64 rng(cfg.seed);
    const double lo1 = region.lo1.value(), w1 = (region.hi1 - region.lo1).value();
    const double lo2 = region.lo2.value(), w2 = (region.hi2 - region.lo2).value();
    std::vector<SamplePoint> pts;
    pts.reserve(static_cast<std::size_t>(cfg.samples));
    long attempts = 0;
    const long max_attempts = 4096L * std::max(cfg.samples, 1);
    while (static_cast<int>(pts.size()) < cfg.samples) {
        if (++attempts > max_attempts)
            throw EngineError("sampling exhausted: guards leave no room in the region");
        double a = lo1 + unit_double(rng) * w1;
        double b = lo2 + unit_double(rng) * w2;
        bool ok = true;
        for (const auto& g : region.guards)
            if (!guard_ok(g, vars, a, b, cfg.guard_eps)) { ok = false; break; }
        if (ok)
            for (const auto& g : extra)
                if (!guard_ok(g, vars, a, b, cfg.guard_eps)) { ok = false; break; }
        if (ok) pts.push_back({a, b});
    }
    return pts;
}

EquivReport equiv_zero_report(const Expr& e, const VarPair& vars, const SampleRegion& region,
                              const OracleConfig& cfg) {
    auto pts = draw_samples(vars, region, cfg, collect_guards(e));
    const auto terms = top_terms(e);

    std::vector<double> violation(pts.size()), absval(pts.size());
    par::for_each_index(pts.size(), [&](std::size_t i) {
        auto v = eval_checked(e, vars, pts[i].a, pts[i].b);
        if (!v) {
            violation[i] = std::numeric_limits<double>::infinity();
            absval[i] = std::numeric_limits<double>::infinity();
            return;
        }
        double scale = 0.0;
        for (const auto& t : terms) {
            auto tv = eval_checked(t, vars, pts[i].a, pts[i].b);
            if (!tv) {
                scale = std::numeric_limits<double>::infinity();
                break;
            }
            scale = std::max(scale, std::fabs(*tv));
        }
        absval[i] = std::fabs(*v);
        violation[i] = std::isinf(scale) ? std::numeric_limits<double>::infinity()
                                         : absval[i] / (cfg.tol_abs + cfg.tol_rel * scale);
    }, cfg.mode);

    EquivReport rep;
    rep.samples = static_cast<int>(pts.size());
    rep.max_violation = par::max_metric(pts.size(), [&](std::size_t i) { return violation[i]; },
                                        cfg.mode);
    rep.max_abs = par::max_metric(pts.size(), [&](std::size_t i) { return absval[i]; }, cfg.mode);
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (violation[i] == rep.max_violation) { rep.worst = pts[i]; break; }
    rep.equal = rep.max_violation <= 1.0;
    return rep;
}

bool equiv_zero(const Expr& e, const VarPair& vars, const SampleRegion& region,
                const OracleConfig& cfg) {
    return equiv_zero_report(e, vars, region, cfg).equal;
}

bool oracle_equal(const Expr& a, const Expr& b, const VarPair& vars, const SampleRegion& region,
                  const OracleConfig& cfg) {
    return equiv_zero(difference_node(a, b), vars, region, cfg);
}

bool certify_nonvanishing(const Expr& e, const VarPair& vars, const SampleRegion& region,
                          const OracleConfig& cfg) {
    std::vector<SamplePoint> pts;
    try {
        pts = draw_samples(vars, region, cfg, collect_guards(e));
    } catch (const EngineError&) {
        return false;
    }
    double least = par::min_metric(pts.size(), [&](std::size_t i) {
        auto v = eval_checked(e, vars, pts[i].a, pts[i].b);
        return v ? std::fabs(*v) : -std::numeric_limits<double>::infinity();
    }, cfg.mode);
    return least >= cfg.guard_eps;
}

double fd_derivative_gap(const Expr& e, const std::string& var, const VarPair& vars,
                         const SampleRegion& region, const OracleConfig& cfg, double h) {
    Expr d = diff(e, var);
    auto guards = collect_guards(e);
    for (auto& g : collect_guards(d)) guards.push_back(g);
    auto pts = draw_samples(vars, region, cfg, guards);
    const bool first = vars.index_of(var) == 0;
    return par::max_metric(pts.size(), [&](std::size_t i) {
        double a = pts[i].a, b = pts[i].b;
        auto sym = eval_checked(d, vars, a, b);
        auto up = first ? eval_checked(e, vars, a + h, b) : eval_checked(e, vars, a, b + h);
        auto dn = first ? eval_checked(e, vars, a - h, b) : eval_checked(e, vars, a, b - h);
        if (!sym || !up || !dn) return std::numeric_limits<double>::infinity();
        double fd = (*up - *dn) / (2.0 * h);
        return std::fabs(*sym - fd) / (1.0 + std::fabs(*sym));
    }, cfg.mode);
}

}  // namespace characteristica
