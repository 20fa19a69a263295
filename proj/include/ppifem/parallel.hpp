#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ppifem {

/// Serial is the reference implementation used to validate the OpenMP path;
/// both must produce bitwise-identical results.
enum class Exec { Serial, Parallel };

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_num_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

/// Runs fn(i) for i in [0, n). Iterations must be independent; results that
/// are written per-index are deterministic regardless of thread count.
template <class F>
void for_each_index(std::ptrdiff_t n, Exec exec, F&& fn) {
    if (exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
        return;
#endif
    }
    for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
}

/// Deterministic sum of term(i) over [0, n): fixed-size chunks are summed
/// (possibly concurrently) and the partials are combined in chunk order, so
/// the result does not depend on the thread count.
template <class F>
double deterministic_sum(std::ptrdiff_t n, Exec exec, F&& term) {
    constexpr std::ptrdiff_t chunk = 4096;
    const std::ptrdiff_t nchunks = (n + chunk - 1) / chunk;
    std::vector<double> partial(static_cast<std::size_t>(nchunks), 0.0);
    for_each_index(nchunks, exec, [&](std::ptrdiff_t c) {
        const std::ptrdiff_t lo = c * chunk;
        const std::ptrdiff_t hi = std::min(n, lo + chunk);
        double s = 0.0;
        for (std::ptrdiff_t i = lo; i < hi; ++i) s += term(i);
        partial[static_cast<std::size_t>(c)] = s;
    });
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

}  // namespace ppifem
