// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace datascore {

// Environment variable that overrides the default worker count.
inline constexpr const char* kThreadsEnv = "DATASCORE_THREADS";

// Explicit request, else $DATASCORE_THREADS, else hardware concurrency.
// Always at least 1.
std::size_t resolve_thread_count(std::optional<std::size_t> requested = {});

// Runs body(begin, end) over contiguous blocks of [0, n). Blocks are fixed by
// n and threads alone, so any per-index output is schedule independent.
// The exception from the lowest failing block is rethrown.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace datascore
