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

#ifndef UWBRAKE_CHANNEL_HPP
#define UWBRAKE_CHANNEL_HPP

#include "uwbrake/random.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace uwbrake
{

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

// Users placed around a single access point. The large-scale variance of user k is
// path_variance_scale * d_k^(-pathloss_exponent).
struct NetworkTopology
{
    std::vector<double> distances; // meters, one per user
    double path_variance_scale = 0.3;
    double pathloss_exponent = 2.0;

    std::size_t user_count() const { return distances.size(); }
    double user_variance(std::size_t user) const;
};

// Validates and builds a topology from explicit distances
NetworkTopology make_topology(std::vector<double> distances, double path_variance_scale = 0.3,
                              double pathloss_exponent = 2.0);

// Distances drawn i.i.d. uniform on [d_min, d_max]
NetworkTopology sample_topology(std::size_t users, double d_min, double d_max, RandomStream &rng);

// Exponentially decaying average power delay profile with L paths. decay_ratio is the
// (linear) ratio between the first and the last tap variance.
struct ApdpProfile
{
    std::size_t path_count = 1;
    double decay_ratio = 1.0;

    static ApdpProfile from_db(std::size_t path_count, double decay_ratio_db);
    void validate() const;
};

// Variance of tap `tap` (1-based, first path = 1) for a user with large-scale variance
// `user_variance`. For L = 1 the profile degenerates to the user variance.
double tap_variance(const ApdpProfile &profile, double user_variance, std::size_t tap);

// All L tap variances, index 0 holds the first tap
std::vector<double> tap_variances(const ApdpProfile &profile, double user_variance);

// One frequency-selective realization for a single user
struct ChannelRealization
{
    ComplexVector gains; // alpha_k, length L

    std::size_t path_count() const { return gains.size(); }

    // h_k = ||alpha_k||^2
    double channel_gain() const;
};

// Circularly-symmetric complex Gaussian taps with E|alpha_l|^2 = tap_variance(l)
ChannelRealization sample_channel(const ApdpProfile &profile, const NetworkTopology &topology,
                                  std::size_t user, RandomStream &rng);

} // namespace uwbrake

#endif
