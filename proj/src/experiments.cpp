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

#include "uwbrake/experiments.hpp"
#include "uwbrake/channel.hpp"
#include "uwbrake/errors.hpp"
#include "uwbrake/lsa.hpp"
#include "uwbrake/oracle.hpp"
#include "uwbrake/parallel.hpp"
#include "uwbrake/rake.hpp"
#include "uwbrake/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#ifndef UWBRAKE_VERSION
#define UWBRAKE_VERSION "0.1.0"
#endif

namespace uwbrake
{

const char *version_string()
{
    return UWBRAKE_VERSION;
}

// ---------------------------------------------------------------------------------------
// Configuration

void ExperimentConfig::validate() const
{
    utility.validate();
    if (!(noise_variance > 0.0))
        throw ParameterError("noise variance must be positive");
    if (users == 0)
        throw ParameterError("at least one user is required");
    if (paths < 2)
        throw ParameterError("at least two paths are required");
    if (frames == 0 || max_frames == 0)
        throw ParameterError("frame counts must be positive");
    if (std::any_of(chips.begin(), chips.end(), [](std::size_t c) { return c == 0; }))
        throw ParameterError("chips per frame must be positive");
    if (std::any_of(rho_db.begin(), rho_db.end(), [](double r) { return !(r >= 0.0) || std::isinf(r); }))
        throw ParameterError("decay ratio must be a finite value >= 0 dB");
    if (std::any_of(beta.begin(), beta.end(), [](double b) { return !(b > 0.0 && b <= 1.0); }))
        throw ParameterError("finger fractions must lie in (0, 1]");
    if (!(d_min > 0.0 && d_min <= d_max) || std::isinf(d_max))
        throw ParameterError("distance bounds must satisfy 0 < d_min <= d_max");
    if (trials == 0)
        throw ParameterError("at least one trial is required");
    if (audit_paths < 2)
        throw ParameterError("audit path count must be at least 2");
}

namespace
{

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string &key, const std::string &text)
{
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ParameterError("invalid number '" + text + "' for " + key);
    return v;
}

std::uint64_t parse_unsigned(const std::string &key, const std::string &text)
{
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ParameterError("invalid non-negative integer '" + text + "' for " + key);
    return v;
}

std::vector<std::string> split_list(const std::string &text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        if (trim(item).empty())
            throw ParameterError("empty element in list '" + text + "'");
        parts.push_back(trim(item));
    }
    return parts;
}

} // namespace

void apply_setting(ExperimentConfig &c, const std::string &raw_key, const std::string &value)
{
    const std::string key = trim(raw_key);
    auto as_size = [&] { return std::size_t(parse_unsigned(key, value)); };
    auto doubles = [&] {
        std::vector<double> v;
        for (const auto &p : split_list(value))
            v.push_back(parse_double(key, p));
        if (v.empty())
            throw ParameterError("empty list for " + key);
        return v;
    };

    if (key == "users")
        c.users = as_size();
    else if (key == "paths")
        c.paths = as_size();
    else if (key == "chips")
    {
        c.chips.clear();
        for (const auto &p : split_list(value))
            c.chips.push_back(std::size_t(parse_unsigned(key, p)));
        if (c.chips.empty())
            throw ParameterError("empty list for chips");
    }
    else if (key == "frames")
        c.frames = as_size();
    else if (key == "max-frames")
        c.max_frames = as_size();
    else if (key == "rho-db")
        c.rho_db = doubles();
    else if (key == "beta")
        c.beta = doubles();
    else if (key == "d-min")
        c.d_min = parse_double(key, value);
    else if (key == "d-max")
        c.d_max = parse_double(key, value);
    else if (key == "trials")
        c.trials = as_size();
    else if (key == "seed")
        c.seed = parse_unsigned(key, value);
    else if (key == "threads")
        c.threads = unsigned(parse_unsigned(key, value));
    else if (key == "audit-paths")
        c.audit_paths = as_size();
    else if (key == "out")
        c.out = trim(value);
    else if (key == "info-bits")
        c.utility.info_bits = parse_double(key, value);
    else if (key == "total-bits")
        c.utility.total_bits = parse_double(key, value);
    else if (key == "rate")
        c.utility.rate = parse_double(key, value);
    else if (key == "p-max")
        c.utility.p_max = parse_double(key, value);
    else if (key == "noise")
        c.noise_variance = parse_double(key, value);
    else
        throw ParameterError("unknown setting '" + key + "'");
}

void apply_config_stream(ExperimentConfig &config, std::istream &in, const std::string &origin)
{
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line))
    {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        if (trim(line).empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParameterError(origin + ":" + std::to_string(number) + ": expected key=value");
        try
        {
            apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
        }
        catch (const ParameterError &e)
        {
            throw ParameterError(origin + ":" + std::to_string(number) + ": " + e.what());
        }
    }
}

void apply_config_file(ExperimentConfig &config, const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ParameterError("cannot open config file '" + path + "'");
    apply_config_stream(config, in, path);
}

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

double linear_to_db(double linear)
{
    return 10.0 * std::log10(linear);
}

// ---------------------------------------------------------------------------------------
// CSV

void CsvTable::add_row(std::vector<std::string> row)
{
    if (row.size() != columns.size())
        throw std::logic_error("CSV row width does not match the header");
    rows.push_back(std::move(row));
}

std::string csv_number(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string csv_number(std::size_t value)
{
    return std::to_string(value);
}

void write_csv(std::ostream &os, const CsvTable &table, const std::string &comment)
{
    os << "# " << comment << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto &row : table.rows)
    {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << row[i];
        os << '\n';
    }
}

namespace
{

template <typename T>
std::string join(const std::vector<T> &values)
{
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        if (i)
            s += '|';
        if constexpr (std::is_same_v<T, double>)
            s += csv_number(values[i]);
        else
            s += std::to_string(values[i]);
    }
    return s.empty() ? "default" : s;
}

} // namespace

std::string describe_run(const std::string &runner, const ExperimentConfig &c)
{
    std::ostringstream os;
    os << "uwbrake " << version_string() << " runner=" << runner << " seed=" << c.seed << " users=" << c.users
       << " paths=" << c.paths << " chips=" << join(c.chips) << " frames=" << c.frames
       << " max_frames=" << c.max_frames << " rho_db=" << join(c.rho_db) << " beta=" << join(c.beta)
       << " trials=" << c.trials << " d_min=" << csv_number(c.d_min) << " d_max=" << csv_number(c.d_max)
       << " info_bits=" << csv_number(c.utility.info_bits) << " total_bits=" << csv_number(c.utility.total_bits)
       << " rate=" << csv_number(c.utility.rate) << " p_max=" << csv_number(c.utility.p_max)
       << " noise=" << csv_number(c.noise_variance) << " audit_paths=" << c.audit_paths;
    return os.str();
}

// ---------------------------------------------------------------------------------------
// Shared simulation plumbing

namespace
{

template <typename T>
std::vector<T> or_default(const std::vector<T> &values, std::vector<T> fallback)
{
    return values.empty() ? fallback : values;
}

struct TrialDraw
{
    NetworkTopology topology;
    std::vector<ChannelRealization> channels;
};

// Distances from the trial's topology sub-stream, user k's taps from sub-stream k
TrialDraw draw_trial(const ExperimentConfig &c, const ApdpProfile &profile, std::uint64_t trial)
{
    TrialDraw d;
    auto topo_rng = RandomStream::derive(c.seed, trial, RandomStream::topology_slot);
    d.topology = sample_topology(c.users, c.d_min, c.d_max, topo_rng);
    d.channels.reserve(c.users);
    for (std::size_t k = 0; k < c.users; ++k)
    {
        auto rng = RandomStream::derive(c.seed, trial, k);
        d.channels.push_back(sample_channel(profile, d.topology, k, rng));
    }
    return d;
}

// Gains for N_f frames from gains computed with a single frame: SI and MAI scale as 1/N
LinkGains with_frames(const LinkGains &single_frame, std::size_t frames)
{
    const double f = 1.0 / double(frames);
    auto h_si = single_frame.h_si;
    auto h_mai = single_frame.h_mai;
    for (auto &v : h_si)
        v *= f;
    for (auto &v : h_mai)
        v *= f;
    return make_link_gains(single_frame.h_sp, std::move(h_si), std::move(h_mai), single_frame.noise_variance);
}

LsaParams lsa_params(const ExperimentConfig &c, std::size_t chips, double rho, double beta)
{
    return LsaParams::from_network(c.users, c.paths, chips, c.frames, rho, beta, c.utility, c.noise_variance);
}

} // namespace

// ---------------------------------------------------------------------------------------
// Runners

RunResult run_gamma_curve(const ExperimentConfig &c)
{
    c.validate();
    RunResult r;
    r.table.columns = {"si_ratio", "target_sinr", "efficiency", "ber"};
    GammaCache gamma(c.utility.total_bits);
    for (int step = 0; step <= 120; ++step)
    {
        const double s = std::pow(10.0, step / 10.0);
        const double g = gamma(s);
        r.table.add_row({csv_number(s), csv_number(g), csv_number(efficiency(g, c.utility.total_bits)),
                         csv_number(ber_estimate(g))});
    }
    return r;
}

RunResult run_apdp(const ExperimentConfig &c)
{
    c.validate();
    RunResult r;
    r.table.columns = {"rho_db", "tap", "normalized_delay", "relative_power_db"};
    for (double rho_db : or_default(c.rho_db, {0.0, 10.0, 20.0}))
    {
        const auto profile = ApdpProfile::from_db(c.paths, rho_db);
        const auto v = tap_variances(profile, 1.0);
        for (std::size_t l = 0; l < v.size(); ++l)
            r.table.add_row({csv_number(rho_db), csv_number(l + 1), csv_number(double(l) / double(c.paths - 1)),
                             csv_number(linear_to_db(v[l] / v[0]))});
    }
    return r;
}

RunResult run_mu_nu_curves(const ExperimentConfig &c)
{
    c.validate();
    std::vector<double> betas = c.beta;
    if (betas.empty())
        for (int i = 1; i <= 100; ++i)
            betas.push_back(i / 100.0);

    RunResult r;
    r.table.columns = {"rho_db", "lambda", "beta", "mu", "nu"};
    for (double rho_db : or_default(c.rho_db, {0.0, 10.0, 20.0}))
        for (double lambda : {0.25, 1.0, 4.0})
            for (double beta : betas)
            {
                const double rho = db_to_linear(rho_db);
                r.table.add_row({csv_number(rho_db), csv_number(lambda), csv_number(beta), csv_number(mu(rho, beta)),
                                 csv_number(nu(rho, beta, lambda))});
            }
    return r;
}

RunResult run_po_vs_frames(const ExperimentConfig &c)
{
    c.validate();
    const std::size_t chips = or_default(c.chips, {50}).front();
    const SpreadingConfig single{1, chips};

    RunResult r;
    r.table.columns = {"rho_db", "beta", "frames", "po", "trials", "unconverged", "min_frames_analytic"};

    for (double rho_db : or_default(c.rho_db, {0.0, 10.0, 20.0}))
        for (double beta : or_default(c.beta, {0.1}))
        {
            const double rho = db_to_linear(rho_db);
            const auto profile = ApdpProfile::from_db(c.paths, rho_db);
            const auto selector = RakeSelector::partial(beta, c.paths);
            const std::size_t analytic = min_frames(lsa_params(c, chips, rho, beta));
            if (analytic < recommended_min_frames)
                r.warnings.push_back("rho=" + csv_number(rho_db) + " dB, beta=" + csv_number(beta) +
                                     ": analytic minimum N_f = " + std::to_string(analytic) + " is below " +
                                     std::to_string(recommended_min_frames));

            // clamped[t][nf - 1], unconverged[t][nf - 1]
            std::vector<std::vector<char>> clamped(c.trials), unconverged(c.trials);
            parallel_for(c.trials, c.threads, [&](std::size_t t) {
                const auto draw = draw_trial(c, profile, t);
                const auto base = link_gains(draw.channels, selector, single, c.noise_variance);
                clamped[t].assign(c.max_frames, 0);
                unconverged[t].assign(c.max_frames, 0);
                for (std::size_t nf = 1; nf <= c.max_frames; ++nf)
                {
                    const auto outcome = solve_equilibrium(with_frames(base, nf), c.utility);
                    clamped[t][nf - 1] = outcome.any_clamped() ? 1 : 0;
                    unconverged[t][nf - 1] = outcome.converged ? 0 : 1;
                }
            });

            for (std::size_t nf = 1; nf <= c.max_frames; ++nf)
            {
                std::size_t hits = 0, stuck = 0;
                for (std::size_t t = 0; t < c.trials; ++t)
                {
                    hits += clamped[t][nf - 1];
                    stuck += unconverged[t][nf - 1];
                }
                r.table.add_row({csv_number(rho_db), csv_number(beta), csv_number(nf),
                                 csv_number(double(hits) / double(c.trials)), csv_number(c.trials), csv_number(stuck),
                                 csv_number(analytic)});
            }
        }
    return r;
}

std::vector<NmseResult> utility_nmse(const ExperimentConfig &c)
{
    c.validate();
    const std::size_t chips = or_default(c.chips, {50}).front();
    const double rho_db = or_default(c.rho_db, {10.0}).front();
    const double rho = db_to_linear(rho_db);
    const auto betas = or_default(c.beta, {1.0, 0.5, 0.3, 0.1});
    const auto profile = ApdpProfile::from_db(c.paths, rho_db);
    const SpreadingConfig spreading{c.frames, chips};

    const auto arake = lsa_params(c, chips, rho, 1.0);
    std::vector<double> loss(betas.size());
    for (std::size_t b = 0; b < betas.size(); ++b)
        loss[b] = db_to_linear(loss_db(lsa_params(c, chips, rho, betas[b])));

    // Per trial and finger fraction: sum of squared relative errors and sample count
    std::vector<std::vector<double>> sums(c.trials, std::vector<double>(betas.size(), 0.0));
    std::vector<std::vector<std::size_t>> counts(c.trials, std::vector<std::size_t>(betas.size(), 0));

    parallel_for(c.trials, c.threads, [&](std::size_t t) {
        const auto draw = draw_trial(c, profile, t);
        for (std::size_t b = 0; b < betas.size(); ++b)
        {
            const auto gains =
                link_gains(draw.channels, RakeSelector::partial(betas[b], c.paths), spreading, c.noise_variance);
            const auto outcome = solve_equilibrium(gains, c.utility);
            for (std::size_t k = 0; k < c.users; ++k)
            {
                const double simulated = outcome.utilities[k];
                if (!(simulated > 0.0))
                    continue;
                const double predicted = predict_utility(arake, draw.channels[k].channel_gain()) / loss[b];
                const double e = (predicted - simulated) / simulated;
                sums[t][b] += e * e;
                ++counts[t][b];
            }
        }
    });

    std::vector<NmseResult> out;
    for (std::size_t b = 0; b < betas.size(); ++b)
    {
        NmseResult res;
        res.beta = betas[b];
        res.loss_db = linear_to_db(loss[b]);
        double total = 0.0;
        for (std::size_t t = 0; t < c.trials; ++t)
        {
            total += sums[t][b];
            res.samples += counts[t][b];
        }
        res.nmse = res.samples ? total / double(res.samples) : std::numeric_limits<double>::quiet_NaN();
        out.push_back(res);
    }
    return out;
}

RunResult run_utility_vs_gain(const ExperimentConfig &c)
{
    c.validate();
    const std::size_t chips = or_default(c.chips, {50}).front();
    const double rho_db = or_default(c.rho_db, {10.0}).front();
    const double rho = db_to_linear(rho_db);
    const auto betas = or_default(c.beta, {1.0, 0.5, 0.3, 0.1});
    const auto profile = ApdpProfile::from_db(c.paths, rho_db);
    const SpreadingConfig spreading{c.frames, chips};
    const auto arake = lsa_params(c, chips, rho, 1.0);

    RunResult r;
    r.table.columns = {"record",      "beta",          "user",           "channel_gain",
                       "h_sp",        "power_w",       "sinr",           "utility_sim",
                       "utility_pred", "utility_arake_shifted", "utility_times_power", "nmse",
                       "samples"};

    // One realization shared by every receiver bank
    const auto draw = draw_trial(c, profile, 0);
    for (double beta : betas)
    {
        const auto params = lsa_params(c, chips, rho, beta);
        const double loss = db_to_linear(loss_db(params));
        const auto gains = link_gains(draw.channels, RakeSelector::partial(beta, c.paths), spreading, c.noise_variance);
        const auto outcome = solve_equilibrium(gains, c.utility);
        if (!outcome.converged)
            r.warnings.push_back("beta=" + csv_number(beta) + ": equilibrium iteration did not converge");
        if (outcome.any_clamped())
            r.warnings.push_back("beta=" + csv_number(beta) + ": at least one user transmits at p_max");
        for (std::size_t k = 0; k < c.users; ++k)
        {
            const double h = draw.channels[k].channel_gain();
            r.table.add_row({"point", csv_number(beta), csv_number(k + 1), csv_number(h), csv_number(gains.h_sp[k]),
                             csv_number(outcome.powers[k]), csv_number(outcome.sinrs[k]),
                             csv_number(outcome.utilities[k]), csv_number(predict_utility(params, gains.h_sp[k])),
                             csv_number(predict_utility(arake, h) / loss),
                             csv_number(outcome.utilities[k] * outcome.powers[k]), "", ""});
        }
    }

    for (const auto &n : utility_nmse(c))
        r.table.add_row({"nmse", csv_number(n.beta), "", "", "", "", "", "", "", "", "", csv_number(n.nmse),
                         csv_number(n.samples)});
    return r;
}

RunResult run_loss_vs_beta(const ExperimentConfig &c)
{
    c.validate();
    std::vector<double> betas = c.beta;
    if (betas.empty())
        for (int i = 1; i <= 20; ++i)
            betas.push_back(i / 20.0);

    RunResult r;
    r.table.columns = {"rho_db", "chips", "lambda", "beta", "loss_db", "feasible"};
    for (double rho_db : or_default(c.rho_db, {0.0, 10.0}))
        for (std::size_t chips : or_default(c.chips, {50, 200}))
            for (double beta : betas)
            {
                const auto params = lsa_params(c, chips, db_to_linear(rho_db), beta);
                double loss = std::numeric_limits<double>::quiet_NaN();
                bool feasible = true;
                try
                {
                    loss = loss_db(params);
                }
                catch (const InfeasibleError &)
                {
                    feasible = false;
                }
                r.table.add_row({csv_number(rho_db), csv_number(chips), csv_number(params.load_factor),
                                 csv_number(beta), csv_number(loss), feasible ? "1" : "0"});
            }
    return r;
}

RunResult run_validate(const ExperimentConfig &c)
{
    c.validate();
    AuditOptions options;
    options.path_count = c.audit_paths;
    options.mc.seed = c.seed;
    options.mc.threads = c.threads;
    const auto rows = full_audit(options);

    RunResult r;
    r.table.columns = {"quantity", "params", "finite", "closed", "rel_err", "tolerance", "gating", "pass", "note"};
    for (const auto &row : rows)
    {
        r.table.add_row({row.quantity, row.params, csv_number(row.finite), csv_number(row.closed),
                         csv_number(row.rel_err), csv_number(row.tolerance), row.gating ? "1" : "0",
                         row.pass ? "1" : "0", row.note});
        if (row.gating && !row.pass)
            r.warnings.push_back("audit failure: " + row.quantity + " at " + row.params + " (rel_err " +
                                 csv_number(row.rel_err) + " > " + csv_number(row.tolerance) + ")");
    }
    r.passed = audit_passed(rows);
    return r;
}

} // namespace uwbrake
