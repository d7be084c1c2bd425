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

#include "uwbrake/oracle.hpp"
#include "uwbrake/channel.hpp"
#include "uwbrake/errors.hpp"
#include "uwbrake/parallel.hpp"
#include "uwbrake/rake.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace uwbrake
{

namespace
{

std::string point_label(double rho, double beta, double lambda, std::size_t path_count)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, "rho=%g;beta=%g;lambda=%g;L=%zu", rho, beta, lambda, path_count);
    return buf;
}

std::string region_name(NuRegion region)
{
    switch (region)
    {
    case NuRegion::low_load:
        return "low_load";
    case NuRegion::mid_load_sparse:
        return "mid_load_sparse";
    case NuRegion::mid_load_dense:
        return "mid_load_dense";
    case NuRegion::high_load:
        return "high_load";
    case NuRegion::full_load:
        return "full_load";
    }
    return "unknown";
}

void check_oracle_inputs(std::size_t path_count, double rho, double beta)
{
    if (path_count < 2)
        throw ParameterError("finite-L oracle needs at least two paths");
    if (!(rho >= 1.0) || std::isinf(rho))
        throw ParameterError("decay ratio must be a finite value >= 1");
    if (!(beta > 0.0 && beta <= 1.0))
        throw ParameterError("finger fraction must lie in (0, 1]");
}

double phi_sq(std::size_t path_count, std::size_t i, double chips)
{
    return std::min(double(path_count - i), chips) / chips;
}

bool is_flat(double rho)
{
    return std::abs(rho - 1.0) < flat_profile_threshold;
}

} // namespace

double ProfileMatrices::theta_sq(std::size_t l, std::size_t m) const
{
    if (l < 1 || l > path_count || m < 1 || m > path_count)
        throw IndexError("theta index outside 1..L");
    const double s = step[l - 1] + step[m - 1];
    return variance[l - 1] * variance[m - 1] * s * s;
}

ProfileMatrices profile_matrices(std::size_t path_count, double rho, double beta, double user_variance)
{
    check_oracle_inputs(path_count, rho, beta);
    ProfileMatrices pm;
    pm.path_count = path_count;
    pm.finger_count = RakeSelector::partial(beta, path_count).finger_count;
    pm.variance = tap_variances(ApdpProfile{path_count, rho}, user_variance);

    const std::size_t L = path_count;
    pm.path_profile.resize(L);
    pm.rake_profile.resize(L);
    pm.step.resize(L);
    for (std::size_t l = 0; l < L; ++l)
    {
        pm.path_profile[l] = std::sqrt(pm.variance[l]);
        pm.step[l] = l < pm.finger_count ? 1.0 : 0.0;
        pm.rake_profile[l] = pm.step[l] * pm.path_profile[l];
    }

    // Tail sums, accumulated from the last tap backwards
    pm.path_c_diag.assign(L, 0.0);
    pm.rake_c_diag.assign(L, 0.0);
    double tail = 0.0, rake_tail = 0.0;
    for (std::size_t l = L; l-- > 0;)
    {
        pm.path_c_diag[l] = tail / double(L);
        pm.rake_c_diag[l] = rake_tail / double(L);
        tail += pm.variance[l];
        rake_tail += pm.step[l] * pm.variance[l];
    }
    return pm;
}

namespace
{

double si_numerator_direct(const ProfileMatrices &pm, double chips)
{
    const std::size_t L = pm.path_count;
    double total = 0.0;
    for (std::size_t i = 1; i <= L - 1; ++i)
    {
        double inner = 0.0;
        for (std::size_t l = 1; l <= i; ++l)
            inner += pm.theta_sq(l, L + l - i);
        total += phi_sq(L, i, chips) * inner;
    }
    return total / (double(L) * double(L));
}

// Sum of weight * variance_l * variance_{L+l-i} over l in [first, last]
double weighted_band(const ProfileMatrices &pm, std::size_t i, std::size_t first, std::size_t last, double weight)
{
    const std::size_t L = pm.path_count;
    double s = 0.0;
    for (std::size_t l = first; l <= last; ++l)
        s += pm.variance[l - 1] * pm.variance[L + l - i - 1];
    return weight * s;
}

double si_numerator_case_table(const ProfileMatrices &pm, double chips)
{
    const std::size_t L = pm.path_count;
    const std::size_t P = pm.finger_count;
    double total = 0.0;

    auto add = [&](std::size_t i, double inner) { total += phi_sq(L, i, chips) * inner; };

    if (2 * P <= L)
    {
        // Fingers cover at most half the profile: the pairs (l, L+l-i) are both on fingers
        // only for the largest lags
        for (std::size_t i = 1; i <= P; ++i)
            add(i, weighted_band(pm, i, 1, i, 1.0));
        for (std::size_t i = P + 1; i <= L - P; ++i)
            add(i, weighted_band(pm, i, 1, P, 1.0));
        for (std::size_t i = L - P + 1; i <= L - 1; ++i)
        {
            const std::size_t both = P + i - L;
            add(i, weighted_band(pm, i, 1, both, 4.0) + weighted_band(pm, i, both + 1, P, 1.0));
        }
    }
    else
    {
        for (std::size_t i = 1; i <= L - P; ++i)
            add(i, weighted_band(pm, i, 1, i, 1.0));
        for (std::size_t i = L - P + 1; i <= std::min(P, L - 1); ++i)
        {
            const std::size_t both = P + i - L;
            add(i, weighted_band(pm, i, 1, both, 4.0) + weighted_band(pm, i, both + 1, i, 1.0));
        }
        for (std::size_t i = P + 1; i <= L - 1; ++i)
        {
            const std::size_t both = P + i - L;
            add(i, weighted_band(pm, i, 1, both, 4.0) + weighted_band(pm, i, both + 1, P, 1.0));
        }
    }
    return total / (double(L) * double(L));
}

double finite_chips(std::size_t path_count, double lambda)
{
    if (!(lambda > 0.0) || std::isinf(lambda))
        throw ParameterError("load factor must be positive and finite");
    return lambda * double(path_count);
}

} // namespace

FiniteSums finite_sums(std::size_t path_count, double rho, double beta, double lambda)
{
    const auto pm = profile_matrices(path_count, rho, beta);
    const double chips = finite_chips(path_count, lambda);
    const double L = double(path_count);

    FiniteSums s;
    for (std::size_t l = 0; l < path_count; ++l)
    {
        s.gain_num += pm.variance[l];
        s.mai_den += pm.step[l] * pm.variance[l];
        s.mai_num_rake += pm.variance[l] * pm.rake_c_diag[l];
        s.mai_num_path += pm.step[l] * pm.variance[l] * pm.path_c_diag[l];
    }
    s.gain_num /= L;
    s.mai_den /= L;
    s.mai_num_rake /= L;
    s.mai_num_path /= L;
    s.si_den = s.mai_den * s.mai_den;
    s.si_num = si_numerator_direct(pm, chips);
    s.mu = (s.mai_num_rake + s.mai_num_path) / s.si_den;
    s.nu = s.si_num / s.si_den;
    s.gain_ratio = s.gain_num / s.mai_den;
    return s;
}

double finite_mu(std::size_t path_count, double rho, double beta)
{
    const auto pm = profile_matrices(path_count, rho, beta);
    double den = 0.0, num = 0.0;
    for (std::size_t l = 0; l < path_count; ++l)
    {
        den += pm.step[l] * pm.variance[l];
        num += pm.variance[l] * pm.rake_c_diag[l] + pm.step[l] * pm.variance[l] * pm.path_c_diag[l];
    }
    den /= double(path_count);
    num /= double(path_count);
    return num / (den * den);
}

double finite_mai_inv(std::size_t path_count, std::size_t users, double processing_gain, double rho, double beta)
{
    if (users == 0)
        throw ParameterError("at least one user is required");
    if (!(processing_gain > 0.0))
        throw ParameterError("processing gain must be positive");
    return double(users - 1) / processing_gain * finite_mu(path_count, rho, beta);
}

namespace
{

double finite_nu_with(std::size_t path_count, double rho, double beta, double lambda,
                      double (*numerator)(const ProfileMatrices &, double))
{
    const auto pm = profile_matrices(path_count, rho, beta);
    const double chips = finite_chips(path_count, lambda);
    double den = 0.0;
    for (std::size_t l = 0; l < path_count; ++l)
        den += pm.step[l] * pm.variance[l];
    den /= double(path_count);
    return numerator(pm, chips) / (den * den);
}

} // namespace

double finite_nu(std::size_t path_count, double rho, double beta, double lambda)
{
    return finite_nu_with(path_count, rho, beta, lambda, si_numerator_direct);
}

double finite_nu_case_table(std::size_t path_count, double rho, double beta, double lambda)
{
    return finite_nu_with(path_count, rho, beta, lambda, si_numerator_case_table);
}

double finite_si_inv(std::size_t path_count, double processing_gain, double rho, double beta, double lambda)
{
    if (!(processing_gain > 0.0))
        throw ParameterError("processing gain must be positive");
    const double direct = finite_nu(path_count, rho, beta, lambda);
    const double table = finite_nu_case_table(path_count, rho, beta, lambda);
    if (std::abs(direct - table) > 1e-12 * std::abs(direct))
        throw std::logic_error("SI double sum depends on the summation order");
    return direct / processing_gain;
}

double closed_mai_den(double rho, double beta)
{
    if (is_flat(rho))
        return beta;
    const double t = std::log(rho);
    return -std::expm1(-beta * t) / t;
}

double closed_mai_num_rake(double rho, double beta)
{
    if (is_flat(rho))
        return 0.5 * beta * beta;
    const double t = std::log(rho);
    const double d = -std::expm1(-beta * t); // rho^-beta (rho^beta - 1)
    return d * d / (2.0 * t * t);
}

double closed_mai_num_path(double rho, double beta)
{
    if (is_flat(rho))
        return beta - 0.5 * beta * beta;
    const double t = std::log(rho);
    const double rb = std::pow(rho, beta);
    return std::pow(rho, -1.0 - 2.0 * beta) * (rb - 1.0) * (rho - 2.0 * rb + rb * rho) / (2.0 * t * t);
}

double closed_si_den(double rho, double beta)
{
    const double d = closed_mai_den(rho, beta);
    return d * d;
}

double closed_gain_num(double rho)
{
    if (is_flat(rho))
        return 1.0;
    const double t = std::log(rho);
    return -std::expm1(-t) / t;
}

bool has_alternative_si_num(NuRegion region)
{
    return region == NuRegion::low_load || region == NuRegion::mid_load_dense || region == NuRegion::high_load;
}

double closed_si_num(NuRegion region, double rho, double beta, double lambda, bool as_printed)
{
    if (is_flat(rho))
        return nu_flat_branch(region, beta, lambda) * beta * beta;

    const double r = rho, b = beta, l = lambda;
    const double lr = std::log(r);
    const double lr3 = lr * lr * lr;
    const double rb = std::pow(r, b);
    const double rl = std::pow(r, l);
    // The dense and high-load forms carry a power with exponent (lambda + beta + 1) whose base
    // is rho in the form consistent with the finite sums, lambda in the alternative one.
    const double token = std::pow(as_printed ? l : r, l + b + 1.0);

    switch (region)
    {
    case NuRegion::low_load: {
        const double lead = as_printed ? (rb - 1.0) : (rl - 1.0);
        return (r * lead * (4.0 * rb * rb + 3.0 * rl - 1.0) - 2.0 * rb * rl * (rb + 3.0 * r - 1.0) * l * lr) /
               (2.0 * rl * rb * rb * r * l * lr3);
    }
    case NuRegion::mid_load_sparse:
        return (r * (rb * rb - 1.0) * (4.0 * rl - 1.0) - 2.0 * rb * rl * (3.0 * r * b - l + rb * l) * lr) /
               (2.0 * rl * rb * rb * r * l * lr3);
    case NuRegion::mid_load_dense:
        return (-4.0 * r * r * rb * rb - 4.0 * r * r * rl + rb * rb * rl * rl + 4.0 * r * r * rb * rb * rl +
                3.0 * r * r * rl * rl - 2.0 * token * (rb * l + 3.0 * r * l + b - 1.0) * lr) /
               (2.0 * r * r * rb * rb * rl * l * lr3);
    case NuRegion::high_load: {
        const double mid = as_printed ? 3.0 * r * l : 3.0 * r * b;
        return (-r * r * rb * rb - 4.0 * r * r * rl + rb * rb * rl * rl + 4.0 * r * r * rb * rb * rl -
                2.0 * token * (rb * l + mid + b - 1.0) * lr) /
               (2.0 * r * r * rb * rb * rl * l * lr3);
    }
    case NuRegion::full_load:
        return (2.0 * r * (rb * rb - 1.0) - (rb + b + 3.0 * r * b - 1.0) * rb * lr) / (rb * rb * r * l * lr3);
    }
    throw ParameterError("unknown region");
}

McEstimates monte_carlo_estimates(const McConfig &config)
{
    if (config.trials < 2)
        throw ParameterError("Monte Carlo estimates need at least two trials");
    if (config.users == 0)
        throw ParameterError("at least one user is required");

    const ApdpProfile profile{config.path_count, config.rho};
    profile.validate();
    const auto selector = RakeSelector::partial(config.beta, config.path_count);
    const SpreadingConfig spreading{config.frames, config.chips_per_frame};
    spreading.validate();
    const auto topology = make_topology(std::vector<double>(config.users, 1.0), 1.0, 2.0);

    struct TrialMeans
    {
        double mai_inv, si_inv, gain_ratio;
    };
    std::vector<TrialMeans> per_trial(config.trials);

    parallel_for(config.trials, config.threads, [&](std::size_t t) {
        std::vector<ChannelRealization> channels;
        channels.reserve(config.users);
        for (std::size_t k = 0; k < config.users; ++k)
        {
            auto rng = RandomStream::derive(config.seed, t, k);
            channels.push_back(sample_channel(profile, topology, k, rng));
        }
        const auto gains = link_gains(channels, selector, spreading, 1.0);
        TrialMeans m{0.0, 0.0, 0.0};
        for (std::size_t k = 0; k < config.users; ++k)
        {
            m.mai_inv += gains.mai_ratio_inv[k];
            m.si_inv += gains.h_si[k] / gains.h_sp[k];
            m.gain_ratio += channels[k].channel_gain() / gains.h_sp[k];
        }
        const double K = double(config.users);
        per_trial[t] = {m.mai_inv / K, m.si_inv / K, m.gain_ratio / K};
    });

    auto summarize = [&](double TrialMeans::*field) {
        McEstimate e;
        e.trials = config.trials;
        double sum = 0.0;
        for (const auto &m : per_trial)
            sum += m.*field;
        e.mean = sum / double(config.trials);
        double ss = 0.0;
        for (const auto &m : per_trial)
            ss += (m.*field - e.mean) * (m.*field - e.mean);
        e.std_error = std::sqrt(ss / double(config.trials - 1) / double(config.trials));
        return e;
    };
    return {summarize(&TrialMeans::mai_inv), summarize(&TrialMeans::si_inv), summarize(&TrialMeans::gain_ratio)};
}

AuditRow make_audit_row(std::string quantity, std::string params, double finite, double closed, double tolerance,
                        bool gating, std::string note)
{
    AuditRow row;
    row.quantity = std::move(quantity);
    row.params = std::move(params);
    row.finite = finite;
    row.closed = closed;
    row.rel_err = closed != 0.0 ? std::abs(finite - closed) / std::abs(closed) : std::abs(finite);
    row.tolerance = tolerance;
    row.gating = gating;
    row.pass = std::isfinite(row.rel_err) && row.rel_err <= tolerance;
    row.note = std::move(note);
    return row;
}

namespace
{

// Tolerances for rows whose finite form is exact at rho = 1 (or beta = 1) versus rows that
// only converge as L grows
struct Tolerances
{
    double relative, exact;
};

void append_intermediates(std::vector<AuditRow> &rows, std::size_t L, double rho, double beta, double lambda,
                          const Tolerances &tol)
{
    const auto params = point_label(rho, beta, lambda, L);
    const auto s = finite_sums(L, rho, beta, lambda);
    const bool flat = is_flat(rho);
    const std::size_t fingers = RakeSelector::partial(beta, L).finger_count;
    const bool exact_fingers = std::abs(double(fingers) - beta * double(L)) < 1e-9;
    const double exact_or_rel = (flat && exact_fingers) ? tol.exact : tol.relative;

    // The second user's denominator, with a different large-scale variance
    const double other_variance = 0.25;
    const auto pm_j = profile_matrices(L, rho, beta, other_variance);
    double den_j = 0.0;
    for (std::size_t l = 0; l < L; ++l)
        den_j += pm_j.step[l] * pm_j.variance[l];
    den_j /= double(L);

    rows.push_back(make_audit_row("mai_den_user_k", params, s.mai_den, closed_mai_den(rho, beta), exact_or_rel));
    rows.push_back(make_audit_row("mai_den_user_j", params + ";user_variance=0.25", den_j,
                                  other_variance * closed_mai_den(rho, beta), exact_or_rel));
    rows.push_back(
        make_audit_row("mai_num_rake_tail", params, s.mai_num_rake, closed_mai_num_rake(rho, beta), tol.relative));
    rows.push_back(
        make_audit_row("mai_num_path_tail", params, s.mai_num_path, closed_mai_num_path(rho, beta), tol.relative));
    rows.push_back(make_audit_row("mai_ratio", params, s.mu, mu(rho, beta), tol.relative));
    rows.push_back(make_audit_row("si_den", params, s.si_den, closed_si_den(rho, beta), exact_or_rel));

    const NuRegion region = nu_region(beta, lambda);
    rows.push_back(make_audit_row("si_num_" + region_name(region), params, s.si_num,
                                  closed_si_num(region, rho, beta, lambda), tol.relative));
    if (has_alternative_si_num(region) && !flat)
        rows.push_back(make_audit_row("si_num_" + region_name(region) + "_alternative", params, s.si_num,
                                      closed_si_num(region, rho, beta, lambda, true), tol.relative, false,
                                      "alternative transcription; not supported by the finite sums"));

    rows.push_back(make_audit_row("gain_ratio_num", params, s.gain_num, closed_gain_num(rho),
                                  flat ? tol.exact : tol.relative));
    rows.push_back(make_audit_row("gain_ratio", params, s.gain_ratio, mu(rho, beta), exact_or_rel));
}

} // namespace

std::vector<AuditRow> appendix_intermediates(std::size_t path_count, double rho, double beta, double lambda)
{
    std::vector<AuditRow> rows;
    append_intermediates(rows, path_count, rho, beta, lambda, Tolerances{0.01, 1e-10});
    return rows;
}

std::vector<AuditRow> full_audit(const AuditOptions &options)
{
    const std::size_t L = options.path_count;
    const Tolerances tol{options.relative_tolerance, options.exact_tolerance};
    std::vector<AuditRow> rows;

    // MAI scaling over a grid
    for (double rho : {2.0, 10.0, 100.0})
        for (double beta : {0.1, 0.3, 0.5, 0.7, 0.9})
            rows.push_back(make_audit_row("mu", point_label(rho, beta, 0.0, L), finite_mu(L, rho, beta),
                                          mu(rho, beta), tol.relative));

    // SI scaling, two points per region and two decay ratios
    struct Point
    {
        double beta, lambda;
    };
    const Point region_points[] = {{0.3, 0.2},  {0.7, 0.1},  {0.3, 0.5}, {0.1, 0.25}, {0.7, 0.5},
                                   {0.6, 0.45}, {0.7, 0.9},  {0.3, 0.85}, {0.3, 2.0}, {0.7, 1.5}};
    for (double rho : {10.0, 100.0})
        for (const auto &p : region_points)
        {
            const NuRegion region = nu_region(p.beta, p.lambda);
            const auto params = point_label(rho, p.beta, p.lambda, L);
            const double finite = finite_nu(L, rho, p.beta, p.lambda);
            rows.push_back(make_audit_row("nu_" + region_name(region), params, finite,
                                          nu_branch(region, rho, p.beta, p.lambda), tol.relative));
            if (region == NuRegion::high_load)
                rows.push_back(make_audit_row("nu_high_load_alternative", params, finite,
                                              nu_high_load_variant(rho, p.beta, p.lambda), tol.relative, false,
                                              "alternative transcription; not supported by the finite sums"));
        }

    // Flat profile limits
    for (double beta : {0.1, 0.5, 0.9})
        rows.push_back(make_audit_row("mu_flat", point_label(1.0, beta, 0.0, L), finite_mu(L, 1.0, beta),
                                      mu_flat(beta), tol.relative));
    for (const auto &p : {region_points[0], region_points[2], region_points[4], region_points[6], region_points[8]})
    {
        const NuRegion region = nu_region(p.beta, p.lambda);
        rows.push_back(make_audit_row("nu_flat_" + region_name(region), point_label(1.0, p.beta, p.lambda, L),
                                      finite_nu(L, 1.0, p.beta, p.lambda), nu_flat_branch(region, p.beta, p.lambda),
                                      tol.relative));
    }

    // All-Rake limits
    for (double rho : {10.0, 100.0})
    {
        rows.push_back(make_audit_row("mu_arake", point_label(rho, 1.0, 0.0, L), finite_mu(L, rho, 1.0),
                                      mu_arake(rho), tol.relative));
        for (double lambda : {0.25, 0.5, 2.0, 4.0})
            rows.push_back(make_audit_row("nu_arake", point_label(rho, 1.0, lambda, L), finite_nu(L, rho, 1.0, lambda),
                                          nu_arake(rho, lambda), tol.relative));
    }

    // Flat all-Rake limits
    rows.push_back(make_audit_row("mu_flat_arake", point_label(1.0, 1.0, 0.0, L), finite_mu(L, 1.0, 1.0),
                                  mu_flat_arake(), tol.relative));
    for (double lambda : {0.25, 1.0, 4.0})
        rows.push_back(make_audit_row("nu_flat_arake", point_label(1.0, 1.0, lambda, L),
                                      finite_nu(L, 1.0, 1.0, lambda), nu_flat_arake(lambda), tol.relative));

    // Every intermediate sum, once, at a low-load point
    append_intermediates(rows, L, 10.0, 0.3, 0.2, tol);

    // SI numerators of the remaining regions
    for (const auto &p : {region_points[2], region_points[4], region_points[6], region_points[8]})
    {
        const double rho = 10.0;
        const NuRegion region = nu_region(p.beta, p.lambda);
        const auto params = point_label(rho, p.beta, p.lambda, L);
        const auto s = finite_sums(L, rho, p.beta, p.lambda);
        rows.push_back(make_audit_row("si_num_" + region_name(region), params, s.si_num,
                                      closed_si_num(region, rho, p.beta, p.lambda), tol.relative));
        if (has_alternative_si_num(region))
            rows.push_back(make_audit_row("si_num_" + region_name(region) + "_alternative", params, s.si_num,
                                          closed_si_num(region, rho, p.beta, p.lambda, true), tol.relative, false,
                                          "alternative transcription; not supported by the finite sums"));
    }

    // Cases where the finite sum is exact
    {
        const double beta = 0.3;
        const auto params = point_label(1.0, beta, 0.2, L);
        const auto s = finite_sums(L, 1.0, beta, 0.2);
        rows.push_back(make_audit_row("mai_den_flat", params, s.mai_den, closed_mai_den(1.0, beta), tol.exact));
        rows.push_back(make_audit_row("si_den_flat", params, s.si_den, closed_si_den(1.0, beta), tol.exact));
        rows.push_back(make_audit_row("gain_ratio_num_flat", params, s.gain_num, closed_gain_num(1.0), tol.exact));
        rows.push_back(make_audit_row("gain_ratio_flat", params, s.gain_ratio, mu_flat(beta), tol.exact));
        const auto a = finite_sums(L, 10.0, 1.0, 0.2);
        rows.push_back(make_audit_row("gain_ratio_arake", point_label(10.0, 1.0, 0.2, L), a.gain_ratio,
                                      mu_arake(10.0), tol.exact));
    }

    if (options.monte_carlo)
    {
        const auto &mc = options.mc;
        const double lambda = double(mc.chips_per_frame) / double(mc.path_count);
        const double N = double(mc.frames) * double(mc.chips_per_frame);
        const auto params = point_label(mc.rho, mc.beta, lambda, mc.path_count) + ";K=" + std::to_string(mc.users) +
                            ";trials=" + std::to_string(mc.trials);
        const auto est = monte_carlo_estimates(mc);
        const double mai_finite = finite_mai_inv(mc.path_count, mc.users, N, mc.rho, mc.beta);
        const double si_finite = finite_si_inv(mc.path_count, N, mc.rho, mc.beta, lambda);

        rows.push_back(make_audit_row("mc_mai_inv", params, est.mai_inv.mean, mai_finite, 0.05));
        rows.push_back(make_audit_row("mc_si_inv", params, est.si_inv.mean, si_finite, 0.05));
        rows.push_back(make_audit_row("mc_mai_inv_3se", params, est.mai_inv.mean, mai_finite,
                                      3.0 * est.mai_inv.std_error / mai_finite, false,
                                      "tolerance = 3 standard errors of the Monte Carlo mean"));
        rows.push_back(make_audit_row("mc_si_inv_3se", params, est.si_inv.mean, si_finite,
                                      3.0 * est.si_inv.std_error / si_finite, false,
                                      "tolerance = 3 standard errors of the Monte Carlo mean"));

        McConfig ratio_cfg = mc;
        ratio_cfg.trials = options.gain_ratio_trials;
        const auto ratio = monte_carlo_estimates(ratio_cfg).gain_ratio;
        const auto ratio_params = point_label(mc.rho, mc.beta, lambda, mc.path_count) + ";K=" +
                                  std::to_string(mc.users) + ";trials=" + std::to_string(ratio_cfg.trials);
        rows.push_back(make_audit_row("mc_gain_ratio", ratio_params, ratio.mean, mu(mc.rho, mc.beta), 0.05));
    }
    return rows;
}

bool audit_passed(const std::vector<AuditRow> &rows)
{
    return std::all_of(rows.begin(), rows.end(), [](const AuditRow &r) { return !r.gating || r.pass; });
}

ConvergenceQuantity parse_convergence_quantity(const std::string &name)
{
    for (auto q : {ConvergenceQuantity::mu, ConvergenceQuantity::nu, ConvergenceQuantity::mai_den,
                   ConvergenceQuantity::mai_num_rake, ConvergenceQuantity::mai_num_path, ConvergenceQuantity::si_den,
                   ConvergenceQuantity::gain_num, ConvergenceQuantity::gain_ratio})
        if (to_string(q) == name)
            return q;
    throw ParameterError("unknown convergence quantity '" + name + "'");
}

std::string to_string(ConvergenceQuantity quantity)
{
    switch (quantity)
    {
    case ConvergenceQuantity::mu:
        return "mu";
    case ConvergenceQuantity::nu:
        return "nu";
    case ConvergenceQuantity::mai_den:
        return "mai_den";
    case ConvergenceQuantity::mai_num_rake:
        return "mai_num_rake";
    case ConvergenceQuantity::mai_num_path:
        return "mai_num_path";
    case ConvergenceQuantity::si_den:
        return "si_den";
    case ConvergenceQuantity::gain_num:
        return "gain_num";
    case ConvergenceQuantity::gain_ratio:
        return "gain_ratio";
    }
    return "unknown";
}

std::vector<ConvergenceRow> convergence_table(ConvergenceQuantity quantity, const std::vector<std::size_t> &path_counts,
                                              double rho, double beta, double lambda)
{
    if (!std::is_sorted(path_counts.begin(), path_counts.end()) ||
        std::adjacent_find(path_counts.begin(), path_counts.end()) != path_counts.end())
        throw ParameterError("path-count grid must be strictly increasing");

    double closed = 0.0;
    switch (quantity)
    {
    case ConvergenceQuantity::mu:
        closed = mu(rho, beta);
        break;
    case ConvergenceQuantity::nu:
        closed = nu(rho, beta, lambda);
        break;
    case ConvergenceQuantity::mai_den:
        closed = closed_mai_den(rho, beta);
        break;
    case ConvergenceQuantity::mai_num_rake:
        closed = closed_mai_num_rake(rho, beta);
        break;
    case ConvergenceQuantity::mai_num_path:
        closed = closed_mai_num_path(rho, beta);
        break;
    case ConvergenceQuantity::si_den:
        closed = closed_si_den(rho, beta);
        break;
    case ConvergenceQuantity::gain_num:
        closed = closed_gain_num(rho);
        break;
    case ConvergenceQuantity::gain_ratio:
        closed = mu(rho, beta);
        break;
    }

    std::vector<ConvergenceRow> rows;
    for (std::size_t L : path_counts)
    {
        const auto s = finite_sums(L, rho, beta, lambda);
        double finite = 0.0;
        switch (quantity)
        {
        case ConvergenceQuantity::mu:
            finite = s.mu;
            break;
        case ConvergenceQuantity::nu:
            finite = s.nu;
            break;
        case ConvergenceQuantity::mai_den:
            finite = s.mai_den;
            break;
        case ConvergenceQuantity::mai_num_rake:
            finite = s.mai_num_rake;
            break;
        case ConvergenceQuantity::mai_num_path:
            finite = s.mai_num_path;
            break;
        case ConvergenceQuantity::si_den:
            finite = s.si_den;
            break;
        case ConvergenceQuantity::gain_num:
            finite = s.gain_num;
            break;
        case ConvergenceQuantity::gain_ratio:
            finite = s.gain_ratio;
            break;
        }
        rows.push_back({L, finite, closed, closed != 0.0 ? std::abs(finite - closed) / std::abs(closed) : std::abs(finite)});
    }
    return rows;
}

} // namespace uwbrake
