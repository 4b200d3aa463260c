#pragma once

#include <cstddef>
#include <functional>

namespace oscdecay {

// Number of workers used when a caller passes jobs = 0 ("auto").
// Controlled globally so the CLI --jobs flag reaches every kernel.
int default_jobs();
void set_default_jobs(int jobs);

// Runs fn(i) for i in [0, n). With OpenMP available and jobs > 1 the
// iterations are distributed statically; each iteration must only write
// state owned by its own index, so results are identical for any worker
// count. Reductions over the results are done serially by the caller in
// index order to keep reports byte-stable.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  int jobs = 0);

} // namespace oscdecay
