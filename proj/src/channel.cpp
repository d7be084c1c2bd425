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

#include "uwbrake/channel.hpp"
#include "uwbrake/errors.hpp"

#include <cmath>
#include <string>

namespace uwbrake
{

double NetworkTopology::user_variance(std::size_t user) const
{
    if (user >= distances.size())
        throw IndexError("user index " + std::to_string(user) + " out of range");
    return path_variance_scale * std::pow(distances[user], -pathloss_exponent);
}

NetworkTopology make_topology(std::vector<double> distances, double path_variance_scale, double pathloss_exponent)
{
    if (distances.empty())
        throw ParameterError("topology needs at least one user");
    for (double d : distances)
        if (!(d > 0.0) || !std::isfinite(d))
            throw ParameterError("user distances must be positive and finite");
    if (!(path_variance_scale > 0.0))
        throw ParameterError("path variance scale must be positive");
    if (!std::isfinite(pathloss_exponent))
        throw ParameterError("path-loss exponent must be finite");

    NetworkTopology t;
    t.distances = std::move(distances);
    t.path_variance_scale = path_variance_scale;
    t.pathloss_exponent = pathloss_exponent;
    return t;
}

NetworkTopology sample_topology(std::size_t users, double d_min, double d_max, RandomStream &rng)
{
    if (users == 0)
        throw ParameterError("topology needs at least one user");
    if (!(d_min > 0.0) || !(d_max >= d_min) || !std::isfinite(d_max))
        throw ParameterError("distance bounds must satisfy 0 < d_min <= d_max");

    std::vector<double> d(users);
    for (auto &x : d)
        x = (d_min == d_max) ? d_min : rng.uniform(d_min, d_max);
    return make_topology(std::move(d));
}

ApdpProfile ApdpProfile::from_db(std::size_t path_count, double decay_ratio_db)
{
    ApdpProfile p{path_count, std::pow(10.0, decay_ratio_db / 10.0)};
    p.validate();
    return p;
}

void ApdpProfile::validate() const
{
    if (path_count == 0)
        throw ParameterError("profile needs at least one path");
    if (!(decay_ratio >= 1.0) || !std::isfinite(decay_ratio))
        throw ParameterError("aPDP decay ratio must be >= 1 (0 dB)");
}

double tap_variance(const ApdpProfile &profile, double user_variance, std::size_t tap)
{
    profile.validate();
    if (tap < 1 || tap > profile.path_count)
        throw IndexError("tap index " + std::to_string(tap) + " outside 1.." + std::to_string(profile.path_count));
    if (profile.path_count == 1)
        return user_variance;

    const double exponent = double(tap - 1) / double(profile.path_count - 1);
    if (tap == profile.path_count)
        return user_variance / profile.decay_ratio;
    return user_variance * std::pow(profile.decay_ratio, -exponent);
}

std::vector<double> tap_variances(const ApdpProfile &profile, double user_variance)
{
    std::vector<double> v(profile.path_count);
    for (std::size_t l = 0; l < v.size(); ++l)
        v[l] = tap_variance(profile, user_variance, l + 1);
    return v;
}

double ChannelRealization::channel_gain() const
{
    double h = 0.0;
    for (const auto &a : gains)
        h += std::norm(a);
    return h;
}

ChannelRealization sample_channel(const ApdpProfile &profile, const NetworkTopology &topology,
                                  std::size_t user, RandomStream &rng)
{
    const auto var = tap_variances(profile, topology.user_variance(user));

    ChannelRealization ch;
    ch.gains.resize(var.size());
    for (std::size_t l = 0; l < var.size(); ++l)
    {
        const double scale = std::sqrt(var[l] / 2.0);
        const double re = rng.normal();
        const double im = rng.normal();
        ch.gains[l] = Complex(scale * re, scale * im);
    }
    return ch;
}

} // namespace uwbrake
