#include "memnet/parallel.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace memnet {

namespace {
std::atomic<int> g_jobs{0};
}

void set_jobs(int n) { g_jobs.store(n < 0 ? 0 : n, std::memory_order_relaxed); }

int resolved_jobs() {
    const int n = g_jobs.load(std::memory_order_relaxed);
    if (n > 0) return n;
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace memnet
