#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace claimcheck::core {

// Runs fn(i) for i in [0, n) on at most `width` threads. The first exception
// thrown by any call is rethrown after all workers finish.
inline void bounded_parallel_for(std::size_t n, std::size_t width,
                                 const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  width = std::clamp<std::size_t>(width, 1, n);
  if (width == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(width);
    for (std::size_t w = 0; w < width; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace claimcheck::core
