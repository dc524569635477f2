#ifndef SHF_PARALLEL_HPP
#define SHF_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace shf {

/// Worker count: hardware concurrency capped by ECHO_COLLAPSE_THREADS.
unsigned thread_budget();

/// Runs fn(i) for i in [0, n). Chunked statically so results written to
/// preallocated slots are deterministic regardless of thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace shf

#endif
