// Static-partition parallel map over sentence indices. Results are written
// into caller-owned slots indexed by position, so output order (and therefore
// any merged report) is independent of the number of jobs.
#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace scud {

inline void parallel_for(size_t count, unsigned jobs,
                         const std::function<void(size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  unsigned workers = jobs;
  if (workers > count) workers = static_cast<unsigned>(count);
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace scud
