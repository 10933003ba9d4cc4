/*
Copyright 2026 The cmden Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include <functional>

namespace cmden {

/// Number of worker threads: hardware concurrency capped by the
/// CMDEN_THREADS environment variable (>= 1).
int worker_count();

/// Runs fn(row) for every row in [begin, end), statically partitioned over
/// the workers. Each row must write to disjoint outputs; reductions are the
/// caller's job and must be accumulated in fixed row order so results are
/// bit-identical for any thread count.
void parallel_rows(int begin, int end, const std::function<void(int)>& fn);

}  // namespace cmden
