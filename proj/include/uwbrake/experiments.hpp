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

#ifndef UWBRAKE_EXPERIMENTS_HPP
#define UWBRAKE_EXPERIMENTS_HPP

#include "uwbrake/power_game.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace uwbrake
{

// Version string embedded in every CSV comment line
const char *version_string();

// Settings shared by all runners. List-valued fields left empty select the runner's own
// default grid (see each runner).
struct ExperimentConfig
{
    UtilityParams utility;         // D = M = 100 b, R = 100 kb/s, p_max = 1 uW
    double noise_variance = 5e-16; // W
    std::size_t users = 8;
    std::size_t paths = 200;
    std::vector<std::size_t> chips; // N_c; default 50
    std::size_t frames = 20;        // N_f
    std::size_t max_frames = 40;    // upper end of the frame scan
    std::vector<double> rho_db;     // aPDP decay ratio in dB
    std::vector<double> beta;       // finger fractions
    double d_min = 3.0;             // m
    double d_max = 20.0;            // m
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    unsigned threads = 0;          // 0 = hardware concurrency
    std::size_t audit_paths = 4000; // path count of the finite-L certification
    std::string out;                // empty = standard output

    void validate() const;
};

// Applies one key=value setting. Keys mirror the long command-line flags without dashes,
// e.g. "rho-db", "beta", "users"; list keys accept comma-separated values and replace the
// current list. Throws ParameterError for unknown keys or malformed values.
void apply_setting(ExperimentConfig &config, const std::string &key, const std::string &value);

// Reads a flat key=value file ('#' starts a comment, blank lines ignored)
void apply_config_file(ExperimentConfig &config, const std::string &path);
void apply_config_stream(ExperimentConfig &config, std::istream &in, const std::string &origin = "config");

double db_to_linear(double db);
double linear_to_db(double linear);

struct CsvTable
{
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
};

// Fixed-precision number formatting used by every CSV
std::string csv_number(double value);
std::string csv_number(std::size_t value);

// Writes "# <comment>", the header row and the data rows
void write_csv(std::ostream &os, const CsvTable &table, const std::string &comment);

struct RunResult
{
    CsvTable table;
    bool passed = true;                // false when a validation runner found a failure
    std::vector<std::string> warnings; // human-readable notes for standard error
};

// One-line description of the runner, the configuration and the seed, plus the version
std::string describe_run(const std::string &runner, const ExperimentConfig &config);

// Target SINR versus self-interference ratio on a log-spaced grid from 1 to 1e12
RunResult run_gamma_curve(const ExperimentConfig &config);

// Relative tap power (dB) versus normalized excess delay; rho default {0, 10, 20} dB
RunResult run_apdp(const ExperimentConfig &config);

// mu and nu versus beta in (0, 1] for rho default {0, 10, 20} dB and lambda in {0.25, 1, 4}
// (beta grid default 0.01 .. 1 in steps of 0.01)
RunResult run_mu_nu_curves(const ExperimentConfig &config);

// Fraction of trials with at least one user at p_max versus N_f = 1 .. max_frames, for rho
// default {0, 10, 20} dB and beta default 0.1. Distances and channels are redrawn per trial
// and shared across frame counts.
RunResult run_po_vs_frames(const ExperimentConfig &config);

// Simulated versus predicted equilibrium utilities for beta default {1, 0.5, 0.3, 0.1} on a
// single seeded realization (distances fixed by the seed), followed by the normalized mean
// square error of the loss-shifted all-Rake prediction over `trials` realizations.
// rho default 10 dB.
RunResult run_utility_vs_gain(const ExperimentConfig &config);

// Loss versus beta for rho default {0, 10} dB and N_c default {50, 200}
RunResult run_loss_vs_beta(const ExperimentConfig &config);

// Full finite-L and Monte Carlo certification of the closed forms
RunResult run_validate(const ExperimentConfig &config);

// Normalized mean square error of the loss-shifted all-Rake utility prediction for one
// finger fraction: mean over users and trials of ((u_pred - u_sim) / u_sim)^2
struct NmseResult
{
    double beta = 0.0;
    double nmse = 0.0;
    double loss_db = 0.0;
    std::size_t samples = 0;
};

std::vector<NmseResult> utility_nmse(const ExperimentConfig &config);

} // namespace uwbrake

#endif
