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

#ifndef UWBRAKE_RANDOM_HPP
#define UWBRAKE_RANDOM_HPP

#include <cstdint>
#include <random>

namespace uwbrake
{

// Seeded pseudo-random stream. Experiments never share one stream between
// trials: each (trial, user) pair gets its own sub-stream derived from the
// master seed, so results do not depend on the order trials are executed in.
class RandomStream
{
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    // Sub-stream for a given trial and slot (user index, or one of the reserved slots below)
    static RandomStream derive(std::uint64_t master_seed, std::uint64_t trial, std::uint64_t slot);

    static constexpr std::uint64_t topology_slot = 0xFFFF'FFFF'FFFF'FF00ULL;

    double uniform(double lo, double hi)
    {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    double normal() { return normal_(engine_); }

    std::mt19937_64 &engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

// SplitMix64 finalizer, used to decorrelate derived seeds
std::uint64_t mix_seed(std::uint64_t x);

} // namespace uwbrake

#endif
