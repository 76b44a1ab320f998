// Deterministic work-sharing loop. Chunk boundaries are fixed by the
// iteration count alone, so results never depend on the worker count as long
// as iterations write disjoint state (reductions in this codebase are
// serial).

#ifndef LPRF_PARALLEL_H
#define LPRF_PARALLEL_H

#include <cstdint>
#include <functional>

namespace lprf {

void set_thread_count(int n);
int thread_count();

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body);

}  // namespace lprf

#endif
