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

#ifndef UWBRAKE_ORACLE_HPP
#define UWBRAKE_ORACLE_HPP

#include "uwbrake/lsa.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace uwbrake
{

// Brute-force counterparts of the large-system closed forms. The trace functional
// Phi[X] = lim (1/L) tr X is realized at finite L as (1/L) tr X with the exact discrete
// tap variances rho^(-(l-1)/(L-1)); all user variances are 1 unless stated otherwise.

// Diagonal profile data of one user at finite L
struct ProfileMatrices
{
    std::size_t path_count = 0;
    std::size_t finger_count = 0;
    std::vector<double> variance;     // per-tap variance, index 0 = first tap
    std::vector<double> path_profile; // per-tap standard deviation
    std::vector<double> rake_profile; // standard deviation restricted to the fingers, 0 elsewhere
    std::vector<double> step;         // 1 on the fingers, 0 elsewhere
    std::vector<double> path_c_diag;  // diagonal of C_A C_A^H: (1/L) sum_{m > l} variance_m
    std::vector<double> rake_c_diag;  // diagonal of C_B C_B^H: (1/L) sum_{l < m <= L_P} variance_m

    // Squared combination term for taps l and m (1-based):
    // variance_l variance_m (step_l + step_m)^2
    double theta_sq(std::size_t l, std::size_t m) const;
};

ProfileMatrices profile_matrices(std::size_t path_count, double rho, double beta, double user_variance = 1.0);

// Finite-L sums behind the closed forms (unit user variance)
struct FiniteSums
{
    double mai_den = 0.0;       // (1/L) sum_{l <= L_P} variance_l
    double mai_num_rake = 0.0;  // (1/L) sum_l variance_l {C_B C_B^H}_ll
    double mai_num_path = 0.0;  // (1/L) sum_l step_l variance_l {C_A C_A^H}_ll
    double si_den = 0.0;        // mai_den^2
    double si_num = 0.0;        // (1/L^2) sum_i phi_i^2 sum_{l <= i} theta_sq(l, L + l - i)
    double gain_num = 0.0;      // (1/L) sum_l variance_l
    double mu = 0.0;            // (mai_num_rake + mai_num_path) / mai_den^2
    double nu = 0.0;            // si_num / si_den
    double gain_ratio = 0.0;    // gain_num / mai_den
};

// lambda sets N_c = lambda L (not necessarily an integer)
FiniteSums finite_sums(std::size_t path_count, double rho, double beta, double lambda);

// MAI scaling at finite L: (N / (K - 1)) zeta^-1
double finite_mu(std::size_t path_count, double rho, double beta);
double finite_mai_inv(std::size_t path_count, std::size_t users, double processing_gain, double rho, double beta);

// SI scaling at finite L, summed with the lag index outermost
double finite_nu(std::size_t path_count, double rho, double beta, double lambda);

// Same quantity summed piecewise over the index ranges on which the finger pattern of
// theta_sq is constant (weights 4, 1, 0)
double finite_nu_case_table(std::size_t path_count, double rho, double beta, double lambda);

// nu / N at finite L; evaluates both summation orders and throws std::logic_error if they
// disagree beyond 1e-12 relative
double finite_si_inv(std::size_t path_count, double processing_gain, double rho, double beta, double lambda);

// Closed forms of the intermediate sums for unit user variance. At rho = 1 the flat limits
// are returned.
double closed_mai_den(double rho, double beta);
double closed_mai_num_rake(double rho, double beta);
double closed_mai_num_path(double rho, double beta);
double closed_si_den(double rho, double beta);
double closed_gain_num(double rho);

// Closed SI numerator on a region. as_printed selects the alternative transcription that the
// audit keeps for comparison (identical to the default on regions where only one exists).
double closed_si_num(NuRegion region, double rho, double beta, double lambda, bool as_printed = false);
bool has_alternative_si_num(NuRegion region);

// Monte Carlo estimates over random channels
struct McConfig
{
    std::size_t path_count = 400;
    std::size_t users = 8;
    std::size_t chips_per_frame = 100;
    std::size_t frames = 1;
    double rho = 10.0;
    double beta = 0.5;
    std::size_t trials = 200;
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

struct McEstimate
{
    double mean = 0.0;
    double std_error = 0.0; // of the mean, from per-trial averages
    std::size_t trials = 0;
};

struct McEstimates
{
    McEstimate mai_inv;    // zeta^-1
    McEstimate si_inv;     // varsigma^-1
    McEstimate gain_ratio; // ||alpha||^2 / h_sp
};

McEstimates monte_carlo_estimates(const McConfig &config);

// One line of the audit report
struct AuditRow
{
    std::string quantity;
    std::string params;
    double finite = 0.0;
    double closed = 0.0;
    double rel_err = 0.0;
    double tolerance = 0.0;
    bool gating = true;
    bool pass = false;
    std::string note;
};

AuditRow make_audit_row(std::string quantity, std::string params, double finite, double closed, double tolerance,
                        bool gating = true, std::string note = {});

// Every intermediate sum at one point: MAI denominators for two users, both MAI numerators,
// the MAI ratio, the SI denominator, the SI numerator of the point's region (plus its
// alternative transcription when one exists), and the channel-gain ratio with its numerator.
std::vector<AuditRow> appendix_intermediates(std::size_t path_count, double rho, double beta, double lambda);

struct AuditOptions
{
    std::size_t path_count = 4000;
    double relative_tolerance = 0.01;
    double exact_tolerance = 1e-10;
    bool monte_carlo = true;
    McConfig mc;
    std::size_t gain_ratio_trials = 500;
};

// The complete certification: mu, every nu branch, the flat/all-Rake limits, every
// intermediate exactly once, and the Monte Carlo cross-checks
std::vector<AuditRow> full_audit(const AuditOptions &options = {});

bool audit_passed(const std::vector<AuditRow> &rows);

enum class ConvergenceQuantity
{
    mu,
    nu,
    mai_den,
    mai_num_rake,
    mai_num_path,
    si_den,
    gain_num,
    gain_ratio
};

ConvergenceQuantity parse_convergence_quantity(const std::string &name);
std::string to_string(ConvergenceQuantity quantity);

struct ConvergenceRow
{
    std::size_t path_count = 0;
    double finite = 0.0;
    double closed = 0.0;
    double rel_err = 0.0;
};

std::vector<ConvergenceRow> convergence_table(ConvergenceQuantity quantity, const std::vector<std::size_t> &path_counts,
                                              double rho, double beta, double lambda);

} // namespace uwbrake

#endif
