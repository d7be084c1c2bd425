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

#include "uwbrake/lsa.hpp"
#include "uwbrake/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace uwbrake
{

namespace
{

void check_profile(double rho, double beta)
{
    if (!(rho >= 1.0) || std::isinf(rho))
        throw ParameterError("decay ratio must be a finite value >= 1");
    if (!(beta > 0.0 && beta <= 1.0))
        throw ParameterError("finger fraction must lie in (0, 1]");
}

void check_load(double lambda)
{
    if (!(lambda > 0.0) || std::isinf(lambda))
        throw ParameterError("load factor must be positive and finite");
}

// Lagrange cubic through (0, f0), (h, f1), (2h, f2), (3h, f3), evaluated at t
double cubic_through(double t, double h, double f0, double f1, double f2, double f3)
{
    const double x = t / h;
    const double l0 = -(x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0;
    const double l1 = x * (x - 2.0) * (x - 3.0) / 2.0;
    const double l2 = -x * (x - 1.0) * (x - 3.0) / 2.0;
    const double l3 = x * (x - 1.0) * (x - 2.0) / 6.0;
    return f0 * l0 + f1 * l1 + f2 * l2 + f3 * l3;
}

template <typename Branch>
double near_flat(double log_rho, double flat_value, Branch branch)
{
    const double h = near_flat_log_step;
    return cubic_through(log_rho, h, flat_value, branch(std::exp(h)), branch(std::exp(2.0 * h)),
                         branch(std::exp(3.0 * h)));
}

double nu_arake_general(double rho, double lambda)
{
    const double lr = std::log(rho);
    const double d = (rho - 1.0) * (rho - 1.0) * lambda * lr;
    if (lambda <= 1.0)
        return 2.0 * (rho * rho - 1.0 + std::pow(rho, lambda) - std::pow(rho, 2.0 - lambda) - 2.0 * rho * lambda * lr) /
               d;
    return 2.0 * (rho * rho - 1.0 - 2.0 * rho * lr) / d;
}

// Equilibrium pieces shared by predict() and loss_db()
struct Operating
{
    double mu, nu, gamma, margin;
};

Operating operating_point(double mu_value, double nu_value, double N, std::size_t users, double total_bits)
{
    Operating op{mu_value, nu_value, 0.0, 0.0};
    op.gamma = gamma_star(N / nu_value, total_bits);
    op.margin = N - op.gamma * (double(users - 1) * mu_value + nu_value);
    return op;
}

} // namespace

double mu(double rho, double beta)
{
    check_profile(rho, beta);
    if (std::abs(rho - 1.0) < flat_profile_threshold)
        return mu_flat(beta);
    // (rho - 1) rho^(beta - 1) / (rho^beta - 1) without cancellation for rho close to 1
    const double t = std::log(rho);
    return std::expm1(t) * std::exp((beta - 1.0) * t) / std::expm1(beta * t);
}

NuRegion nu_region(double beta, double lambda)
{
    if (!(beta > 0.0 && beta <= 1.0))
        throw ParameterError("finger fraction must lie in (0, 1]");
    check_load(lambda);
    const double lo = std::min(beta, 1.0 - beta);
    const double hi = std::max(beta, 1.0 - beta);
    if (lambda >= 1.0)
        return NuRegion::full_load;
    if (lambda >= hi)
        return NuRegion::high_load;
    if (lambda > lo)
        return beta <= 0.5 ? NuRegion::mid_load_sparse : NuRegion::mid_load_dense;
    return NuRegion::low_load;
}

double nu_branch(NuRegion region, double rho, double beta, double lambda)
{
    check_profile(rho, beta);
    check_load(lambda);
    if (!(rho > 1.0))
        throw ParameterError("general branches require a decay ratio > 1");

    const double r = rho, b = beta, l = lambda;
    const double lr = std::log(r);
    const double rb = std::pow(r, b);
    const double rl = std::pow(r, l);
    const double sq = (rb - 1.0) * (rb - 1.0);

    switch (region)
    {
    case NuRegion::low_load:
        return (r * (rl - 1.0) * (4.0 * rb * rb + 3.0 * rl - 1.0) - 2.0 * rb * rl * (rb + 3.0 * r - 1.0) * l * lr) /
               (2.0 * sq * l * r * rl * lr);
    case NuRegion::mid_load_sparse:
        return (r * (4.0 * rl - 1.0) * (rb * rb - 1.0) - 2.0 * rb * rl * (3.0 * r * b - l + rb * l) * lr) /
               (2.0 * sq * l * r * rl * lr);
    case NuRegion::mid_load_dense:
        return (-4.0 * r * r * rb * rb - 4.0 * r * r * rl + rb * rb * rl * rl + 4.0 * r * r * rb * rb * rl +
                3.0 * r * r * rl * rl - 2.0 * r * rb * rl * (b + 3.0 * r * l + rb * l - 1.0) * lr) /
               (2.0 * sq * l * r * r * rl * lr);
    case NuRegion::high_load:
        return (-r * r * rb * rb - 4.0 * r * r * rl + rb * rb * rl * rl + 4.0 * r * r * rb * rb * rl -
                2.0 * r * rb * rl * (b + 3.0 * r * b + rb * l - 1.0) * lr) /
               (2.0 * sq * l * r * r * rl * lr);
    case NuRegion::full_load:
        return (2.0 * r * (rb * rb - 1.0) - (rb + b + 3.0 * r * b - 1.0) * rb * lr) / (sq * l * r * lr);
    }
    throw ParameterError("unknown region");
}

double nu_high_load_variant(double rho, double beta, double lambda)
{
    check_profile(rho, beta);
    check_load(lambda);
    if (!(rho > 1.0))
        throw ParameterError("general branches require a decay ratio > 1");
    const double r = rho, b = beta, l = lambda;
    const double lr = std::log(r);
    const double rb = std::pow(r, b);
    const double rl = std::pow(r, l);
    return (-r * r * rb * rb - 4.0 * r * r * rl + rb * rb * rl * rl + 4.0 * r * r * rb * rb * rl -
            2.0 * r * rb * rl * (b + 3.0 * r * l + rb * l - 1.0) * lr) /
           (2.0 * (rb - 1.0) * (rb - 1.0) * l * r * r * rl * lr);
}

double nu(double rho, double beta, double lambda)
{
    check_profile(rho, beta);
    check_load(lambda);
    if (1.0 - beta < all_rake_threshold)
        return nu_arake(rho, lambda);
    if (std::abs(rho - 1.0) < flat_profile_threshold)
        return nu_flat(beta, lambda);

    const NuRegion region = nu_region(beta, lambda);
    const double lr = std::log(rho);
    if (lr < near_flat_log_step)
        return near_flat(lr, nu_flat(beta, lambda),
                         [&](double r) { return nu_branch(region, r, beta, lambda); });
    return nu_branch(region, rho, beta, lambda);
}

double mu_flat(double beta)
{
    check_profile(1.0, beta);
    return 1.0 / beta;
}

double nu_flat_branch(NuRegion region, double beta, double lambda)
{
    check_profile(1.0, beta);
    check_load(lambda);
    const double b = beta, l = lambda;
    switch (region)
    {
    case NuRegion::low_load:
        return (2.0 * b * b + 2.0 * b - 4.0 * l * b + l * l) / (2.0 * b * b);
    case NuRegion::mid_load_sparse:
        return 0.5 * ((2.0 - l) / b + b / l - 1.0);
    case NuRegion::mid_load_dense:
        return (b * b * b + b * b * (9.0 * l - 3.0) + b * (3.0 - 9.0 * l * l) + 4.0 * l * l * l - 3.0 * l * l +
                3.0 * l - 1.0) /
               (6.0 * l * b * b);
    case NuRegion::high_load:
        return (4.0 * b * b * b - 3.0 * b * b + 3.0 * b + (l - 1.0) * (l - 1.0) * (l - 1.0)) / (6.0 * l * b * b);
    case NuRegion::full_load:
        return (4.0 * b * b - 3.0 * b + 3.0) / (6.0 * l * b);
    }
    throw ParameterError("unknown region");
}

double nu_flat(double beta, double lambda)
{
    if (1.0 - beta < all_rake_threshold && beta <= 1.0)
        return nu_flat_arake(lambda);
    return nu_flat_branch(nu_region(beta, lambda), beta, lambda);
}

double mu_arake(double rho)
{
    check_profile(rho, 1.0);
    return 1.0;
}

double nu_arake(double rho, double lambda)
{
    check_profile(rho, 1.0);
    check_load(lambda);
    if (std::abs(rho - 1.0) < flat_profile_threshold)
        return nu_flat_arake(lambda);
    const double lr = std::log(rho);
    if (lr < near_flat_log_step)
        return near_flat(lr, nu_flat_arake(lambda), [&](double r) { return nu_arake_general(r, lambda); });
    return nu_arake_general(rho, lambda);
}

double mu_flat_arake()
{
    return 1.0;
}

double nu_flat_arake(double lambda)
{
    check_load(lambda);
    if (lambda <= 1.0)
        return 2.0 / 3.0 * (lambda * lambda - 3.0 * lambda + 3.0);
    return 2.0 / (3.0 * lambda);
}

LsaParams LsaParams::from_network(std::size_t users, std::size_t path_count, std::size_t chips_per_frame,
                                  std::size_t frames, double decay_ratio, double finger_fraction,
                                  const UtilityParams &utility, double noise_variance)
{
    if (path_count == 0)
        throw ParameterError("path count must be positive");
    LsaParams p;
    p.decay_ratio = decay_ratio;
    p.finger_fraction = finger_fraction;
    p.load_factor = double(chips_per_frame) / double(path_count);
    p.chips_per_frame = chips_per_frame;
    p.frames = frames;
    p.users = users;
    p.utility = utility;
    p.noise_variance = noise_variance;
    p.validate();
    return p;
}

void LsaParams::validate() const
{
    check_profile(decay_ratio, finger_fraction);
    check_load(load_factor);
    if (chips_per_frame == 0 || frames == 0)
        throw ParameterError("chips per frame and frames must be positive");
    if (users == 0)
        throw ParameterError("at least one user is required");
    if (!(noise_variance > 0.0))
        throw ParameterError("noise variance must be positive");
    utility.validate();
}

LsaPrediction predict(const LsaParams &params, double h_sp)
{
    params.validate();
    if (!(h_sp > 0.0))
        throw ParameterError("combined signal gain must be positive");

    const double N = params.processing_gain();
    const auto op = operating_point(mu(params.decay_ratio, params.finger_fraction),
                                    nu(params.decay_ratio, params.finger_fraction, params.load_factor), N,
                                    params.users, params.utility.total_bits);
    LsaPrediction out;
    out.mu = op.mu;
    out.nu = op.nu;
    out.mai_inv = double(params.users - 1) * op.mu / N;
    out.si_inv = op.nu / N;
    out.target_sinr = op.gamma;
    out.margin = op.margin;
    out.feasible = op.margin > 0.0;
    if (out.feasible)
    {
        out.power_w = N * params.noise_variance * op.gamma / (h_sp * op.margin);
        out.utility_bpj = h_sp * params.utility.info_bits / params.utility.total_bits * params.utility.rate *
                          efficiency(op.gamma, params.utility.total_bits) * op.margin /
                          (N * params.noise_variance * op.gamma);
    }
    else
    {
        out.power_w = std::numeric_limits<double>::infinity();
        out.utility_bpj = 0.0;
    }
    out.min_frames = min_frames(params);
    out.ber = ber_estimate(op.gamma);
    return out;
}

namespace
{

[[noreturn]] void throw_infeasible(const LsaParams &params, const char *receiver)
{
    std::ostringstream os;
    os << "no feasible equilibrium for the " << receiver << " (N_f = " << params.frames
       << " is below the minimum frame count " << min_frames(params) << ")";
    throw InfeasibleError(os.str());
}

} // namespace

double predict_power(const LsaParams &params, double h_sp)
{
    const auto p = predict(params, h_sp);
    if (!p.feasible)
        throw_infeasible(params, "receiver");
    return p.power_w;
}

double predict_utility(const LsaParams &params, double h_sp)
{
    const auto p = predict(params, h_sp);
    if (!p.feasible)
        throw_infeasible(params, "receiver");
    return p.utility_bpj;
}

std::size_t min_frames(const LsaParams &params)
{
    params.validate();
    const double m = mu(params.decay_ratio, params.finger_fraction);
    const double n = nu(params.decay_ratio, params.finger_fraction, params.load_factor);
    const double load = double(params.users - 1) * m + n;
    const double Nc = double(params.chips_per_frame);

    // Gamma never exceeds its value without self-interference, which bounds the scan
    const double bound = std::ceil(gamma_star(std::numeric_limits<double>::infinity(), params.utility.total_bits) *
                                   load / Nc);
    const auto last = std::size_t(std::max(1.0, bound));
    for (std::size_t nf = 1; nf < last; ++nf)
    {
        const double N = double(nf) * Nc;
        const double required = std::ceil(gamma_star(N / n, params.utility.total_bits) * load / Nc);
        if (double(nf) >= required)
            return nf;
    }
    return last;
}

double loss_db(const LsaParams &params)
{
    params.validate();
    const double N = params.processing_gain();
    const double M = params.utility.total_bits;
    const double rho = params.decay_ratio;

    const auto pr = operating_point(mu(rho, params.finger_fraction), nu(rho, params.finger_fraction, params.load_factor),
                                    N, params.users, M);
    const auto ar = operating_point(mu_arake(rho), nu_arake(rho, params.load_factor), N, params.users, M);
    if (!(pr.margin > 0.0))
        throw_infeasible(params, "partial Rake");
    if (!(ar.margin > 0.0))
        throw_infeasible(params, "all-Rake");

    const double loss = pr.mu * (efficiency(ar.gamma, M) / efficiency(pr.gamma, M)) * (pr.gamma / ar.gamma) *
                        (ar.margin / pr.margin);
    return 10.0 * std::log10(loss);
}

double invert_loss(double target_db, const LsaParams &params, double beta_min)
{
    if (!(target_db >= 0.0))
        throw ParameterError("target loss must be non-negative");
    if (!(beta_min > 0.0 && beta_min < 1.0))
        throw ParameterError("beta_min must lie in (0, 1)");

    // A partial Rake without a feasible equilibrium counts as an unbounded loss
    auto at = [&](double beta) {
        LsaParams p = params;
        p.finger_fraction = beta;
        try
        {
            return loss_db(p);
        }
        catch (const InfeasibleError &)
        {
            return std::numeric_limits<double>::infinity();
        }
    };
    LsaParams all_rake = params;
    all_rake.finger_fraction = 1.0;
    loss_db(all_rake); // throws when the all-Rake reference itself is infeasible
    if (target_db == 0.0)
        return 1.0;

    const double worst = at(beta_min);
    if (target_db > worst)
    {
        std::ostringstream os;
        os << "target loss " << target_db << " dB exceeds the loss at beta = " << beta_min << " (" << worst << " dB)";
        throw ParameterError(os.str());
    }

    // Loss is decreasing in beta: lo keeps loss >= target, hi keeps loss <= target
    double lo = beta_min, hi = 1.0;
    for (int it = 0; it < 100 && hi - lo > 1e-12; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        if (at(mid) >= target_db)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double ber_estimate(double sinr)
{
    if (!(sinr >= 0.0))
        throw ParameterError("SINR must be non-negative");
    if (std::isinf(sinr))
        return 0.0;
    return 0.5 * std::erfc(std::sqrt(0.5 * sinr));
}

} // namespace uwbrake
