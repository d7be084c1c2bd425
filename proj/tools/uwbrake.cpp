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

// Command-line front end: seeded experiment runners that emit CSV.
//
//   uwbrake <subcommand> [--users K] [--paths L] [--chips Nc]... [--frames Nf]
//           [--rho-db dB]... [--beta b]... [--trials T] [--seed S] [--threads N]
//           [--out file.csv] [--config file]
//
// Exit codes: 0 success, 1 parameter error, 2 validation failure.

#include "uwbrake/errors.hpp"
#include "uwbrake/experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace
{

constexpr int exit_ok = 0;
constexpr int exit_parameter_error = 1;
constexpr int exit_validation_failure = 2;

struct Runner
{
    const char *name;
    const char *help;
    std::function<uwbrake::RunResult(const uwbrake::ExperimentConfig &)> run;
};

std::string join_values(const std::vector<std::string> &values)
{
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i)
        s += (i ? "," : "") + values[i];
    return s;
}

} // namespace

int main(int argc, char **argv)
{
    const std::vector<Runner> runners = {
        {"gamma-curve", "target SINR versus self-interference ratio", uwbrake::run_gamma_curve},
        {"apdp", "average power delay profile versus normalized delay", uwbrake::run_apdp},
        {"mu-nu", "large-system MAI and SI scalings versus finger fraction", uwbrake::run_mu_nu_curves},
        {"po-frames", "probability of a user at maximum power versus frames", uwbrake::run_po_vs_frames},
        {"utility-gain", "equilibrium utility versus channel gain, with nmse", uwbrake::run_utility_vs_gain},
        {"loss-beta", "partial-Rake loss versus finger fraction", uwbrake::run_loss_vs_beta},
        {"validate", "finite-L and Monte Carlo certification of the closed forms", uwbrake::run_validate},
    };

    CLI::App app{"Energy-efficient power control with Rake receivers in IR-UWB networks"};
    app.set_version_flag("--version", std::string(uwbrake::version_string()));
    app.require_subcommand(1, 1);

    std::string config_path;
    app.add_option("--config", config_path, "flat key=value file mirroring the flags (flags override it)")
        ->check(CLI::ExistingFile);

    // Flag name -> collected values; list flags may repeat
    std::map<std::string, std::vector<std::string>> flags;
    struct FlagSpec
    {
        const char *name;
        const char *help;
        bool repeatable;
    };
    const FlagSpec specs[] = {
        {"users", "number of users K", false},
        {"paths", "number of resolvable paths L", false},
        {"chips", "chips per frame N_c (repeatable)", true},
        {"frames", "frames per symbol N_f", false},
        {"max-frames", "upper end of the frame scan", false},
        {"rho-db", "aPDP decay ratio in dB (repeatable)", true},
        {"beta", "finger fraction in (0, 1] (repeatable)", true},
        {"trials", "Monte Carlo trials", false},
        {"seed", "master seed", false},
        {"threads", "worker threads (0 = all cores)", false},
        {"audit-paths", "path count of the finite-L certification", false},
        {"out", "output CSV path (default: standard output)", false},
        {"d-min", "minimum user distance in m", false},
        {"d-max", "maximum user distance in m", false},
        {"noise", "noise variance in W", false},
        {"p-max", "maximum transmit power in W", false},
        {"rate", "bit rate in bit/s", false},
        {"info-bits", "information bits per packet", false},
        {"total-bits", "total bits per packet", false},
    };
    std::vector<std::pair<std::string, CLI::Option *>> options;
    for (const auto &spec : specs)
    {
        auto *opt = app.add_option(std::string("--") + spec.name, flags[spec.name], spec.help);
        if (!spec.repeatable)
            opt->expected(1);
        else
            opt->take_all()->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
        options.emplace_back(spec.name, opt);
    }

    for (const auto &r : runners)
        app.add_subcommand(r.name, r.help)->fallthrough();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::Success &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return exit_parameter_error;
    }

    const Runner *selected = nullptr;
    for (const auto &r : runners)
        if (app.got_subcommand(r.name))
            selected = &r;

    uwbrake::ExperimentConfig config;
    uwbrake::RunResult result;
    try
    {
        if (!config_path.empty())
            uwbrake::apply_config_file(config, config_path);
        for (const auto &[name, opt] : options)
            if (opt->count() > 0)
                uwbrake::apply_setting(config, name, join_values(flags[name]));
        config.validate();
        result = selected->run(config);
    }
    catch (const uwbrake::ParameterError &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_parameter_error;
    }
    catch (const uwbrake::InfeasibleError &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_parameter_error;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_parameter_error;
    }

    const std::string comment = uwbrake::describe_run(selected->name, config);
    if (config.out.empty())
        uwbrake::write_csv(std::cout, result.table, comment);
    else
    {
        std::ofstream out(config.out);
        if (!out)
        {
            std::cerr << "error: cannot write '" << config.out << "'\n";
            return exit_parameter_error;
        }
        uwbrake::write_csv(out, result.table, comment);
    }

    for (const auto &w : result.warnings)
        std::cerr << "warning: " << w << '\n';

    return result.passed ? exit_ok : exit_validation_failure;
}
