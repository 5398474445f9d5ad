#pragma once

#include <cstdint>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ahc::par {

enum class Mode { serial, openmp };

inline Mode& mode_ref() {
    static Mode m = [] {
        const char* e = std::getenv("AHCALC_SERIAL");
        if (e && e[0] == '1') return Mode::serial;
#ifdef _OPENMP
        return Mode::openmp;
#else
        return Mode::serial;
#endif
    }();
    return m;
}

inline Mode mode() { return mode_ref(); }
inline void set_mode(Mode m) { mode_ref() = m; }

inline void set_threads(int t) {
#ifdef _OPENMP
    if (t > 0) omp_set_num_threads(t);
#else
    (void)t;
#endif
}

// Grid-point loop. The OpenMP and serial paths perform identical per-index
// work, so results agree bitwise; reductions must not go through here.
template <class F>
void for_n(std::int64_t count, F&& f) {
#ifdef _OPENMP
    if (mode() == Mode::openmp) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < count; ++i) f(i);
        return;
    }
#endif
    for (std::int64_t i = 0; i < count; ++i) f(i);
}

}  // namespace ahc::par
