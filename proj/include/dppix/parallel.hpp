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

#ifndef DPPIX_PARALLEL_HPP_
#define DPPIX_PARALLEL_HPP_

#include <functional>

namespace dppix {

// Effective worker count: requested if > 0, else the DPPX_THREADS environment
// variable if set to a positive integer, else std::thread::hardware_concurrency
// (minimum 1).
int resolve_thread_count(int requested);

// Runs body(begin, end) over contiguous disjoint chunks of [0, count) on
// num_threads workers (the calling thread is one of them). Chunks partition
// the range in order; callers rely on disjoint writes, no locking is done.
// Exceptions from workers are rethrown on the caller.
void parallel_for(int count, int num_threads,
                  const std::function<void(int, int)>& body);

}  // namespace dppix

#endif  // DPPIX_PARALLEL_HPP_
