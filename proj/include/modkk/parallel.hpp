#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace modkk {

// worker cap from MODKK_THREADS; unset, empty or unparsable means serial
inline std::size_t thread_budget() {
  const char* env = std::getenv("MODKK_THREADS");
  if (!env) return 1;
  try {
    const long long v = std::stoll(env);
    if (v < 1) return 1;
    const std::size_t hw = std::thread::hardware_concurrency();
    return (hw > 0) ? std::min<std::size_t>(std::size_t(v), hw)
                    : std::size_t(v);
  } catch (...) {
    return 1;
  }
}

// fn(i) for i in [0, count); striped across at most thread_budget() workers.
// Exceptions from workers are rethrown (first one wins) after all join.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::min(thread_budget(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace modkk
