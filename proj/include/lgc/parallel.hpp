#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace lgc
{

/// Resolves a requested worker count. 0 means "auto": the LGC_THREADS
/// environment variable if set, otherwise the hardware concurrency.
inline std::size_t resolve_threads(std::size_t requested)
{
  if (requested > 0)
  {
    return requested;
  }
  if (const char* env = std::getenv("LGC_THREADS"))
  {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0)
    {
      return std::size_t(v);
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs `body(i)` for i in [0, n) on up to `threads` workers. Work is split
/// into contiguous fixed chunks, so any body that writes only to slot i gives
/// the same result for every worker count. The first exception thrown by a
/// worker is rethrown on the caller.
template <class Body>
void parallel_for(std::size_t n, std::size_t threads, Body&& body)
{
  threads = std::min(std::max<std::size_t>(threads, 1), n);
  if (threads <= 1)
  {
    for (std::size_t i = 0; i < n; ++i)
    {
      body(i);
    }
    return;
  }

  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> workers;
  workers.reserve(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t)
  {
    const std::size_t first = t * chunk;
    const std::size_t last = std::min(n, first + chunk);
    workers.emplace_back([&, t, first, last] {
      try
      {
        for (std::size_t i = first; i < last; ++i)
        {
          body(i);
        }
      }
      catch (...)
      {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& w : workers)
  {
    w.join();
  }
  for (auto& e : errors)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }
}

}  // namespace lgc
