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

#ifndef UWBRAKE_LSA_HPP
#define UWBRAKE_LSA_HPP

#include "uwbrake/power_game.hpp"

#include <cstddef>

namespace uwbrake
{

// Large-system (L, N_c -> infinity at fixed load factor) closed forms for a PRake with
// MRC fingers on the first beta*L paths of an exponentially decaying aPDP.
//
// Notation: rho = decay ratio (linear, >= 1), beta = finger fraction in (0, 1],
// lambda = load factor N_c / L.

// Thresholds of the limit dispatch
inline constexpr double flat_profile_threshold = 1e-6; // |rho - 1| below this uses the flat-profile limits
inline constexpr double all_rake_threshold = 1e-9;     // 1 - beta below this uses the all-Rake limits
inline constexpr double near_flat_log_step = 0.02;     // ln(rho) below this is interpolated (see nu)

// MAI scaling: (N / (K - 1)) * zeta^-1 -> mu(rho, beta)
double mu(double rho, double beta);

// The five regions of the (beta, lambda) plane on which nu has distinct closed forms
enum class NuRegion
{
    low_load = 1,        // lambda <= min(beta, 1 - beta)
    mid_load_sparse = 2, // min <= lambda <= max, beta <= 1/2
    mid_load_dense = 3,  // min <= lambda <= max, beta >= 1/2
    high_load = 4,       // max(beta, 1 - beta) <= lambda <= 1
    full_load = 5        // lambda >= 1
};

NuRegion nu_region(double beta, double lambda);

// SI scaling: N * varsigma^-1 -> nu(rho, beta, lambda). Dispatches to the flat-profile and
// all-Rake limits near rho = 1 and beta = 1. For 0 < ln(rho) < near_flat_log_step the branch
// expressions lose accuracy to cancellation and the value is obtained by cubic interpolation
// in ln(rho) through the flat limit and the branch at ln(rho) = 1, 2, 3 x near_flat_log_step.
double nu(double rho, double beta, double lambda);

// One general branch, evaluated verbatim regardless of the region of (beta, lambda).
// Requires rho > 1. The high-load branch uses the form that is continuous with its
// neighbours; the competing printed variant is available separately.
double nu_branch(NuRegion region, double rho, double beta, double lambda);

// High-load branch with the bracket (beta + 3 rho lambda + rho^beta lambda - 1) in the
// logarithmic term. Kept for audit purposes only: it disagrees with the finite-L sums.
double nu_high_load_variant(double rho, double beta, double lambda);

// Flat aPDP (rho -> 1)
double mu_flat(double beta);
double nu_flat(double beta, double lambda);
double nu_flat_branch(NuRegion region, double beta, double lambda);

// All-Rake (beta -> 1)
double mu_arake(double rho);
double nu_arake(double rho, double lambda);

// Flat all-Rake (rho -> 1, beta -> 1)
double mu_flat_arake();
double nu_flat_arake(double lambda);

// Network-level inputs of the large-system predictions
struct LsaParams
{
    double decay_ratio = 1.0;     // rho, linear
    double finger_fraction = 1.0; // beta
    double load_factor = 1.0;     // lambda = N_c / L
    std::size_t chips_per_frame = 1;
    std::size_t frames = 1;
    std::size_t users = 1;
    UtilityParams utility;
    double noise_variance = 5e-16; // sigma^2, watts

    // Fills load_factor from the path count
    static LsaParams from_network(std::size_t users, std::size_t path_count, std::size_t chips_per_frame,
                                  std::size_t frames, double decay_ratio, double finger_fraction,
                                  const UtilityParams &utility = {}, double noise_variance = 5e-16);

    double processing_gain() const { return double(frames) * double(chips_per_frame); }
    void validate() const;
};

struct LsaPrediction
{
    double mu = 0.0;
    double nu = 0.0;
    double mai_inv = 0.0;     // (K - 1) mu / N
    double si_inv = 0.0;      // nu / N
    double target_sinr = 0.0; // Gamma(N / nu)
    double margin = 0.0;      // N - Gamma(N / nu) [(K - 1) mu + nu]
    bool feasible = false;    // margin > 0
    double power_w = 0.0;     // at the requested h_sp; +inf when infeasible
    double utility_bpj = 0.0; // at the requested h_sp; 0 when infeasible
    std::size_t min_frames = 0;
    double ber = 0.0;
};

// Every large-system quantity at once, for a user with combined signal gain h_sp
LsaPrediction predict(const LsaParams &params, double h_sp = 1.0);

// Equilibrium transmit power and utility of a user with combined signal gain h_sp.
// Throw InfeasibleError when the margin is not positive.
double predict_power(const LsaParams &params, double h_sp);
double predict_utility(const LsaParams &params, double h_sp);

// Frame counts below this are flagged as outside the regime where the asymptotic analysis
// is trustworthy. Not enforced.
inline constexpr std::size_t recommended_min_frames = 5;

// Smallest N_f with N_f >= ceil(Gamma(N / nu) [(K - 1) mu + nu] / N_c), N = N_f N_c.
// params.frames is ignored.
std::size_t min_frames(const LsaParams &params);

// Utility loss of the PRake with respect to an all-Rake at the same network, in dB.
// Throws InfeasibleError when either receiver has no feasible equilibrium.
double loss_db(const LsaParams &params);

// Finger fraction achieving the requested loss, by bisection on [beta_min, 1].
// params.finger_fraction is ignored. Finger fractions without a feasible equilibrium count as
// an unbounded loss. Throws ParameterError when the target is negative or exceeds the loss at
// beta_min, InfeasibleError when the all-Rake reference is infeasible.
double invert_loss(double target_db, const LsaParams &params, double beta_min = 0.01);

// Q(sqrt(gamma)), the bit error rate of the equilibrium SINR
double ber_estimate(double sinr);

} // namespace uwbrake

#endif
