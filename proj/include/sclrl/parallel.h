// Copyright 2026 The sclrl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCLRL_PARALLEL_H_
#define SCLRL_PARALLEL_H_

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace sclrl {

// Splits [0, n) into `workers` contiguous chunks and runs
// fn(begin, end, worker) on each; chunk boundaries depend only on n and
// workers. The first exception thrown by any chunk is rethrown.
template <typename Fn>
void parallel_chunks(std::size_t n, int workers, Fn&& fn) {
  const auto w = static_cast<std::size_t>(std::max(1, workers));
  if (w == 1 || n <= 1) {
    fn(std::size_t{0}, n, 0);
    return;
  }
  const std::size_t chunk = (n + w - 1) / w;
  std::vector<std::exception_ptr> errors(w);
  {
    std::vector<std::jthread> threads;
    for (std::size_t t = 0; t < w; ++t) {
      const std::size_t begin = std::min(n, t * chunk);
      const std::size_t end = std::min(n, begin + chunk);
      threads.emplace_back([&, begin, end, t] {
        try {
          fn(begin, end, static_cast<int>(t));
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace sclrl

#endif  // SCLRL_PARALLEL_H_
