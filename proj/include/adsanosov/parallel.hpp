// Deterministic index-parallel loops; ADSANOSOV_THREADS caps the worker count.
#pragma once

#include <cstddef>
#include <functional>

namespace ads {

unsigned thread_count();
void set_thread_cap(unsigned cap);  // 0 restores the environment default

// Runs f(i) for i in [0, n). Each index is independent; results must be written by index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace ads
