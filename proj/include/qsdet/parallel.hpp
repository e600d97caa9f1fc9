// Copyright 2026 The qsdet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qsdet {

/// Execution policy for data-parallel kernels. kSerial is the reference
/// path kept for testing; kParallel distributes independent indices over
/// OpenMP threads. Both produce identical per-index results because every
/// index owns its own RNG substream and output slot.
enum class Exec { kSerial, kParallel };

int thread_count();
/// Reads QSDET_THREADS (if set and positive) and applies it to OpenMP.
void configure_threads_from_env();

/// Calls fn(i) for i in [0, n). If any call throws, the exception thrown at
/// the lowest index is rethrown after the loop, so failures are reported
/// the same way regardless of scheduling.
template <class Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
  if (exec == Exec::kSerial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error;
  std::size_t first_index = n;
  std::mutex error_mutex;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (static_cast<std::size_t>(i) < first_index) {
        first_index = static_cast<std::size_t>(i);
        first_error = std::current_exception();
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace qsdet
