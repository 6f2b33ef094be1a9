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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "dppix/parallel.hpp"

TEST_SUITE("parallel") {

TEST_CASE("parallel_for covers every index exactly once") {
  for (const int threads : {1, 2, 3, 16}) {
    for (const int count : {0, 1, 5, 97}) {
      std::vector<std::atomic<int>> hits(count);
      dppix::parallel_for(count, threads, [&](int begin, int end) {
        CHECK(begin <= end);
        for (int i = begin; i < end; ++i) {
          hits[i].fetch_add(1);
        }
      });
      for (int i = 0; i < count; ++i) {
        CHECK(hits[i].load() == 1);
      }
    }
  }
}

TEST_CASE("parallel_for rethrows worker exceptions") {
  CHECK_THROWS_AS(dppix::parallel_for(10, 4,
                                      [](int, int) {
                                        throw std::runtime_error("boom");
                                      }),
                  std::runtime_error);
  CHECK_THROWS_AS(dppix::parallel_for(4, 0, [](int, int) {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(dppix::parallel_for(-1, 1, [](int, int) {}),
                  std::invalid_argument);
}

TEST_CASE("resolve_thread_count prefers the request, then the environment") {
  CHECK(dppix::resolve_thread_count(3) == 3);

  ::setenv("DPPX_THREADS", "5", 1);
  CHECK(dppix::resolve_thread_count(0) == 5);
  CHECK(dppix::resolve_thread_count(2) == 2);

  ::setenv("DPPX_THREADS", "not-a-number", 1);
  CHECK(dppix::resolve_thread_count(0) >= 1);

  ::unsetenv("DPPX_THREADS");
  CHECK(dppix::resolve_thread_count(0) >= 1);
}

}  // TEST_SUITE("parallel")
