/*
 * Copyright 2026 The frobkit Authors.
 * This file is licensed to you under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License. You may obtain a copy
 * of the License at http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software distributed under
 * the License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR REPRESENTATIONS
 * OF ANY KIND, either express or implied. See the License for the specific language
 * governing permissions and limitations under the License.
 */
#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace frobkit {

/// Worker count: FROBKIT_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

///
/// Calls fn(i) for i in [0, n) split into contiguous static chunks across workers.
/// Callers write results into per-index slots, which keeps reductions deterministic.
/// If any call throws, the exception raised at the lowest index is rethrown.
///
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace frobkit
