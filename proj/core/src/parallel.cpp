// Copyright 2026 The uamqa Authors
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

#include "uamqa/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <string>

#include <omp.h>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "uamqa/errors.hpp"

namespace uamqa {

std::optional<int> threads_from_env() {
  const char* raw = std::getenv("UAMQA_THREADS");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  int n = 0;
  const char* end = raw + std::strlen(raw);
  const auto [ptr, ec] = std::from_chars(raw, end, n);
  if (ec != std::errc() || ptr != end || n < 1) {
    throw ConfigError(std::string("UAMQA_THREADS must be a positive integer, got '") +
                      raw + "'");
  }
  return n;
}

int configure_threads() {
  if (const auto n = threads_from_env()) omp_set_num_threads(*n);
  return omp_get_max_threads();
}

void tune_allocator() {
#if defined(__GLIBC__)
  mallopt(M_MMAP_MAX, 0);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
}

}  // namespace uamqa
