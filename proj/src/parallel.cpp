// Copyright 2026 The dppix Authors
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

#include "dppix/parallel.hpp"

#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace dppix {

int resolve_thread_count(int requested) {
  if (requested > 0) {
    return requested;
  }
  if (const char* env = std::getenv("DPPX_THREADS")) {
    try {
      const int parsed = std::stoi(env);
      if (parsed > 0) {
        return parsed;
      }
    } catch (const std::exception&) {
      // Malformed values fall through to hardware detection.
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(int count, int num_threads,
                  const std::function<void(int, int)>& body) {
  if (count < 0) {
    throw std::invalid_argument("parallel_for: count must be >= 0");
  }
  if (num_threads < 1) {
    throw std::invalid_argument("parallel_for: num_threads must be >= 1");
  }
  if (count == 0) {
    return;
  }
  const int workers = num_threads < count ? num_threads : count;
  if (workers == 1) {
    body(0, count);
    return;
  }
  // Chunk w covers [w * count / workers, (w + 1) * count / workers).
  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run_chunk = [&](int w) {
    const int begin = static_cast<int>(
        static_cast<long long>(w) * count / workers);
    const int end = static_cast<int>(
        static_cast<long long>(w + 1) * count / workers);
    try {
      body(begin, end);
    } catch (...) {
      const std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) {
        failure = std::current_exception();
      }
    }
  };
  for (int w = 1; w < workers; ++w) {
    threads.emplace_back(run_chunk, w);
  }
  run_chunk(0);
  for (std::thread& t : threads) {
    t.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

}  // namespace dppix
