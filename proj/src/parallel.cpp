#include "oscdecay/parallel.hpp"

#include <thread>

namespace oscdecay {

namespace {
int g_default_jobs = 0;
}

int default_jobs() {
    if (g_default_jobs > 0) return g_default_jobs;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void set_default_jobs(int jobs) { g_default_jobs = jobs; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  int jobs) {
    if (jobs <= 0) jobs = default_jobs();
#ifdef OSCDECAY_HAVE_OPENMP
    if (jobs > 1 && n > 1) {
        const long long nn = static_cast<long long>(n);
#pragma omp parallel for num_threads(jobs) schedule(static)
        for (long long i = 0; i < nn; ++i) fn(static_cast<std::size_t>(i));
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

} // namespace oscdecay
