// SPDX-License-Identifier: Apache-2.0
//
// uwbrake - energy-efficient power control with Rake receivers in IR-UWB networks
// Copyright (C) 2026 The uwbrake authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef UWBRAKE_PARALLEL_HPP
#define UWBRAKE_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace uwbrake
{

// Worker count used when 0 is requested: the hardware concurrency, at least 1
unsigned default_thread_count();

// Runs body(i) for i in [0, count) on up to `threads` workers (0 = default_thread_count()).
// Indices are distributed in contiguous blocks; callers write results into per-index slots
// and reduce them in index order afterwards, so the outcome never depends on scheduling.
// The first exception thrown by any body is rethrown after all workers have finished.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)> &body);

} // namespace uwbrake

#endif
