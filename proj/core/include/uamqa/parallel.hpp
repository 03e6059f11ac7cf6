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

#pragma once

#include <optional>

namespace uamqa {

/// Worker count cap from UAMQA_THREADS, if set. Throws ConfigError on a
/// value that is not a positive integer.
std::optional<int> threads_from_env();

/// Applies threads_from_env() to the OpenMP runtime; returns the active cap.
int configure_threads();

/// Keeps large tensor buffers on the heap instead of fresh mmap()s, which
/// avoids a page-fault storm on every batch. glibc only; no-op elsewhere.
void tune_allocator();

}  // namespace uamqa
