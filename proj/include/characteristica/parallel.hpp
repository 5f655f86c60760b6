#pragma once

#include <cstddef>
#include <limits>

#ifdef CHARACTERISTICA_HAVE_OPENMP
#include <omp.h>
#endif

namespace characteristica::par {

// The numeric hot paths (oracle scans over sample points, residual scans,
// multi-seed curve tracing) are data-parallel maps followed by a max- or
// min-reduction. Both a serial reference and an OpenMP variant are kept; the
// reductions are associative and commutative, so results do not depend on the
// schedule and the two variants must agree bit for bit (the test suite checks
// that). bench_sampling compares their throughput.

enum class Mode { Serial, OpenMP };

[[nodiscard]] inline Mode default_mode() {
#ifdef CHARACTERISTICA_HAVE_OPENMP
    return Mode::OpenMP;
#else
    return Mode::Serial;
#endif
}

// max over i in [0, n) of f(i); f must be pure. NaN from f is treated as +inf
// so a faulting sample can never be masked by the reduction.
template <typename F>
[[nodiscard]] double max_metric(std::size_t n, const F& f, Mode mode = default_mode()) {
    double best = -std::numeric_limits<double>::infinity();
    auto clean = [](double v) {
        return v != v ? std::numeric_limits<double>::infinity() : v;
    };
#ifdef CHARACTERISTICA_HAVE_OPENMP
    if (mode == Mode::OpenMP) {
#pragma omp parallel for reduction(max : best) schedule(static)
        for (std::size_t i = 0; i < n; ++i) {
            double v = clean(f(i));
            if (v > best) best = v;
        }
        return best;
    }
#else
    (void)mode;
#endif
    for (std::size_t i = 0; i < n; ++i) {
        double v = clean(f(i));
        if (v > best) best = v;
    }
    return best;
}

template <typename F>
[[nodiscard]] double min_metric(std::size_t n, const F& f, Mode mode = default_mode()) {
    return -max_metric(n, [&](std::size_t i) { return -f(i); }, mode);
}

// Independent per-index work (one traced curve per seed, one fixture per id).
template <typename F>
void for_each_index(std::size_t n, const F& f, Mode mode = default_mode()) {
#ifdef CHARACTERISTICA_HAVE_OPENMP
    if (mode == Mode::OpenMP) {
#pragma omp parallel for schedule(dynamic)
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
#else
    (void)mode;
#endif
    for (std::size_t i = 0; i < n; ++i) f(i);
}

}  // namespace characteristica::par
