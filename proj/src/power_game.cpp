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

#include "uwbrake/power_game.hpp"
#include "uwbrake/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace uwbrake
{

namespace
{

constexpr double inf = std::numeric_limits<double>::infinity();

// f'(g) g (1 - g/s) - f(g) divided by the positive factor (1 - e^{-g/2})^{M-1} e^{-g/2}.
// Same sign, same roots, no underflow for large M.
double scaled_residual(double g, double si_ratio, double M)
{
    const double shrink = std::isinf(si_ratio) ? 1.0 : 1.0 - g / si_ratio;
    return 0.5 * M * g * shrink - std::expm1(0.5 * g);
}

double scaled_residual_derivative(double g, double si_ratio, double M)
{
    const double lin = std::isinf(si_ratio) ? 1.0 : 1.0 - 2.0 * g / si_ratio;
    return 0.5 * M * lin - 0.5 * std::exp(0.5 * g);
}

BestResponse best_response_with_target(const LinkGains &gains, std::span<const double> powers, std::size_t k,
                                       double target, const UtilityParams &params)
{
    double interference = gains.noise_variance;
    for (std::size_t j = 0; j < gains.user_count(); ++j)
        if (j != k)
            interference += gains.mai(k, j) * powers[j];

    const double shrink = std::isinf(gains.si_ratio[k]) ? 1.0 : 1.0 - target / gains.si_ratio[k];
    const double p = target * interference / (gains.h_sp[k] * shrink);
    if (p >= params.p_max)
        return {params.p_max, true};
    return {p, false};
}

} // namespace

void UtilityParams::validate() const
{
    if (!(info_bits > 0.0 && info_bits <= total_bits))
        throw ParameterError("packet sizes must satisfy 0 < D <= M");
    if (!(rate > 0.0))
        throw ParameterError("rate must be positive");
    if (!(p_max > 0.0))
        throw ParameterError("maximum power must be positive");
}

double efficiency(double sinr, double total_bits)
{
    if (!(sinr > 0.0))
        return 0.0;
    if (std::isinf(sinr))
        return 1.0;
    // log1p keeps (1 - e^{-x})^M accurate when e^{-x} is tiny
    return std::exp(total_bits * std::log1p(-std::exp(-0.5 * sinr)));
}

double efficiency_derivative(double sinr, double total_bits)
{
    if (!(sinr > 0.0) || std::isinf(sinr))
        return 0.0;
    const double e = std::exp(-0.5 * sinr);
    return 0.5 * total_bits * e * std::exp((total_bits - 1.0) * std::log1p(-e));
}

double gamma_star(double si_ratio, double total_bits)
{
    if (!(si_ratio > 0.0))
        throw ParameterError("self-interference ratio must be positive");
    if (!(total_bits > 0.0))
        throw ParameterError("packet length must be positive");

    const double M = total_bits;
    double lo = 1e-9;
    double hi = std::isinf(si_ratio) ? inf : si_ratio * (1.0 - 1e-9);

    // Tighten an oversized upper end by doubling: the residual is concave and
    // changes sign exactly once on (0, si_ratio).
    for (double probe = 1.0; probe < hi; probe *= 2.0)
    {
        if (scaled_residual(probe, si_ratio, M) < 0.0)
        {
            hi = probe;
            break;
        }
        lo = probe;
    }

    double f_lo = scaled_residual(lo, si_ratio, M);
    double f_hi = scaled_residual(hi, si_ratio, M);
    if (!(f_lo > 0.0) || !(f_hi < 0.0))
    {
        std::ostringstream os;
        os << "no sign change for Gamma(" << si_ratio << "), M = " << M << ": residual(" << lo << ") = " << f_lo
           << ", residual(" << hi << ") = " << f_hi;
        throw SolverError(os.str());
    }

    // Bisection down to a coarse bracket
    while (hi - lo > 1e-3 * lo)
    {
        const double mid = 0.5 * (lo + hi);
        if (scaled_residual(mid, si_ratio, M) > 0.0)
            lo = mid;
        else
            hi = mid;
    }

    // Newton, falling back to bisection whenever the step leaves the bracket
    double g = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it)
    {
        const double r = scaled_residual(g, si_ratio, M);
        if (r == 0.0)
            return g;
        if (r > 0.0)
            lo = g;
        else
            hi = g;

        const double d = scaled_residual_derivative(g, si_ratio, M);
        double next = (d != 0.0) ? g - r / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (std::abs(next - g) <= 1e-15 * g)
            return next;
        g = next;
    }
    return g;
}

double GammaCache::operator()(double si_ratio)
{
    const auto it = values_.find(si_ratio);
    if (it != values_.end())
        return it->second;
    const double g = gamma_star(si_ratio, total_bits_);
    values_.emplace(si_ratio, g);
    return g;
}

double utility(double sinr, double power, const UtilityParams &params)
{
    if (!(power > 0.0))
        return 0.0;
    return params.info_bits / params.total_bits * params.rate * efficiency(sinr, params.total_bits) / power;
}

BestResponse best_response(const LinkGains &gains, std::span<const double> powers, std::size_t k,
                           const UtilityParams &params)
{
    if (powers.size() != gains.user_count())
        throw ParameterError("power vector length must equal the number of users");
    if (k >= gains.user_count())
        throw IndexError("user index out of range");
    if (!(gains.h_sp[k] > 0.0))
        throw DegenerateChannelError("user has zero combined signal gain");
    return best_response_with_target(gains, powers, k, gamma_star(gains.si_ratio[k], params.total_bits), params);
}

bool EquilibriumOutcome::any_clamped() const
{
    return std::find(clamped.begin(), clamped.end(), true) != clamped.end();
}

EquilibriumOutcome solve_equilibrium(const LinkGains &gains, const UtilityParams &params,
                                     const SolverOptions &options)
{
    params.validate();
    if (!(options.tolerance > 0.0))
        throw ParameterError("solver tolerance must be positive");

    const std::size_t K = gains.user_count();
    std::vector<double> target(K);
    for (std::size_t k = 0; k < K; ++k)
        target[k] = gamma_star(gains.si_ratio[k], params.total_bits);

    EquilibriumOutcome out;
    out.powers.assign(K, 0.0);
    out.clamped.assign(K, false);
    std::vector<double> next(K);

    for (std::size_t it = 1; it <= options.max_iterations; ++it)
    {
        double change = 0.0;
        for (std::size_t k = 0; k < K; ++k)
        {
            const auto br = best_response_with_target(gains, out.powers, k, target[k], params);
            next[k] = br.power;
            out.clamped[k] = br.clamped;
            const double scale = std::max(std::abs(next[k]), std::abs(out.powers[k]));
            if (scale > 0.0)
                change = std::max(change, std::abs(next[k] - out.powers[k]) / scale);
        }
        out.powers.swap(next);
        out.iterations = it;
        if (change < options.tolerance)
        {
            out.converged = true;
            break;
        }
    }

    out.sinrs.resize(K);
    out.utilities.resize(K);
    for (std::size_t k = 0; k < K; ++k)
    {
        out.sinrs[k] = sinr(gains, out.powers, k);
        out.utilities[k] = utility(out.sinrs[k], out.powers[k], params);
    }
    return out;
}

std::vector<bool> feasibility(const LinkGains &gains, double total_bits)
{
    std::vector<bool> ok(gains.user_count());
    for (std::size_t k = 0; k < ok.size(); ++k)
    {
        const double g = gamma_star(gains.si_ratio[k], total_bits);
        ok[k] = g * (1.0 / gains.si_ratio[k] + gains.mai_ratio_inv[k]) < 1.0;
    }
    return ok;
}

double reduced_equilibrium_power(const LinkGains &gains, std::size_t k, double total_bits)
{
    if (k >= gains.user_count())
        throw IndexError("user index out of range");
    const double g = gamma_star(gains.si_ratio[k], total_bits);
    const double margin = 1.0 - g * (1.0 / gains.si_ratio[k] + gains.mai_ratio_inv[k]);
    if (!(margin > 0.0))
        return inf;
    return gains.noise_variance * g / (gains.h_sp[k] * margin);
}

} // namespace uwbrake
