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

#ifndef UWBRAKE_POWER_GAME_HPP
#define UWBRAKE_POWER_GAME_HPP

#include "uwbrake/rake.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace uwbrake
{

// Payoff parameters shared by all users. Defaults are the desk-scale simulation values:
// 100-bit packets, 100 kb/s, 1 uW power cap.
struct UtilityParams
{
    double info_bits = 100.0;  // D
    double total_bits = 100.0; // M
    double rate = 100e3;       // R, bit/s
    double p_max = 1e-6;       // W

    void validate() const;
};

// Packet success rate f(gamma) = (1 - exp(-gamma/2))^M
double efficiency(double sinr, double total_bits);
double efficiency_derivative(double sinr, double total_bits);

// Target SINR gamma* = Gamma(si_ratio): the unique root in (0, si_ratio) of
// f'(g) g (1 - g/si_ratio) = f(g). si_ratio may be +inf (no self-interference).
double gamma_star(double si_ratio, double total_bits);

// Memoized gamma_star for a fixed M
class GammaCache
{
public:
    explicit GammaCache(double total_bits) : total_bits_(total_bits) {}
    double operator()(double si_ratio);

private:
    double total_bits_;
    std::map<double, double> values_;
};

// u = (D/M) R f(gamma) / p, taken as 0 at p = 0
double utility(double sinr, double power, const UtilityParams &params);

struct BestResponse
{
    double power = 0.0;
    bool clamped = false;
};

// Utility-maximizing power of user k with every other power held fixed
BestResponse best_response(const LinkGains &gains, std::span<const double> powers, std::size_t k,
                           const UtilityParams &params);

struct SolverOptions
{
    double tolerance = 1e-10; // max relative power change between sweeps
    std::size_t max_iterations = 10000;
};

struct EquilibriumOutcome
{
    std::vector<double> powers;
    std::vector<double> sinrs;
    std::vector<double> utilities;
    std::vector<bool> clamped;
    std::size_t iterations = 0;
    bool converged = false;

    bool any_clamped() const;
};

// Synchronous (Jacobi) best-response sweeps from p = 0. Non-convergence is reported
// through `converged`, not thrown.
EquilibriumOutcome solve_equilibrium(const LinkGains &gains, const UtilityParams &params,
                                     const SolverOptions &options = {});

// Gamma(si_k) * (1/si_k + 1/zeta_k) < 1 for each user
std::vector<bool> feasibility(const LinkGains &gains, double total_bits);

// Equilibrium power written through the user's own ratios only, assuming every user's
// received power h_sp_j p_j is the same. Exact when the users are balanced in that sense,
// a large-N approximation otherwise. Returns +inf when the user is infeasible.
double reduced_equilibrium_power(const LinkGains &gains, std::size_t k, double total_bits);

} // namespace uwbrake

#endif
