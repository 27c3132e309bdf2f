// SPDX-License-Identifier: Apache-2.0

#ifndef MPT_PARALLEL_HPP
#define MPT_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace mpt
{

// Run f(0) ... f(n-1) on up to `threads` workers. Items are independent and write to
// disjoint outputs. The exception of the lowest failing index is rethrown.
template <typename F>
void ParallelFor(int n, int threads, F &&f)
{
  const int workers = std::max(1, std::min(threads, n));
  std::vector<std::exception_ptr> errors(n);
  if (workers == 1)
  {
    for (int k = 0; k < n; k++)
    {
      try
      {
        f(k);
      }
      catch (...)
      {
        errors[k] = std::current_exception();
        break;
      }
    }
  }
  else
  {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; w++)
    {
      pool.emplace_back([&] {
        for (int k = next++; k < n; k = next++)
        {
          try
          {
            f(k);
          }
          catch (...)
          {
            errors[k] = std::current_exception();
          }
        }
      });
    }
    for (auto &t : pool)
    {
      t.join();
    }
  }
  for (auto &e : errors)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }
}

}  // namespace mpt

#endif  // MPT_PARALLEL_HPP
