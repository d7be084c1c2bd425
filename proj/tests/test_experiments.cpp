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

#include "uwbrake/errors.hpp"
#include "uwbrake/experiments.hpp"
#include "uwbrake/lsa.hpp"

#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace uwbrake;
using Catch::Approx;

namespace
{

std::string to_csv(const RunResult &r, const std::string &comment = "test")
{
    std::ostringstream os;
    write_csv(os, r.table, comment);
    return os.str();
}

std::size_t column(const CsvTable &t, const std::string &name)
{
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        if (t.columns[i] == name)
            return i;
    FAIL("missing column " << name);
    return 0;
}

double number(const std::string &s)
{
    return std::stod(s);
}

int run_cli(const std::string &args)
{
    const std::string cmd = std::string(UWBRAKE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentConfig small_config()
{
    ExperimentConfig c;
    c.trials = 6;
    c.paths = 40;
    c.chips = {10};
    c.max_frames = 8;
    c.audit_paths = 200;
    c.threads = 1;
    return c;
}

} // namespace

TEST_CASE("settings are parsed from key=value pairs", "[experiments]")
{
    ExperimentConfig c;
    apply_setting(c, "users", "4");
    apply_setting(c, "rho-db", "0, 10,20");
    apply_setting(c, "beta", "0.5");
    apply_setting(c, "chips", "50,200");
    apply_setting(c, "p-max", "2e-6");
    apply_setting(c, "seed", "99");
    CHECK(c.users == 4);
    CHECK(c.rho_db == std::vector<double>{0.0, 10.0, 20.0});
    CHECK(c.beta == std::vector<double>{0.5});
    CHECK(c.chips == std::vector<std::size_t>{50, 200});
    CHECK(c.utility.p_max == 2e-6);
    CHECK(c.seed == 99);

    CHECK_THROWS_AS(apply_setting(c, "colour", "red"), ParameterError);
    CHECK_THROWS_AS(apply_setting(c, "users", "many"), ParameterError);
    CHECK_THROWS_AS(apply_setting(c, "users", "3x"), ParameterError);
    CHECK_THROWS_AS(apply_setting(c, "beta", "0.5,,0.3"), ParameterError);
}

TEST_CASE("configuration streams and validation", "[experiments]")
{
    ExperimentConfig c;
    std::istringstream in("# network\nusers = 5\n\nbeta=0.1,0.2  # fractions\n");
    apply_config_stream(c, in);
    CHECK(c.users == 5);
    CHECK(c.beta == std::vector<double>{0.1, 0.2});
    CHECK_NOTHROW(c.validate());

    std::istringstream bad("users 5\n");
    CHECK_THROWS_AS(apply_config_stream(c, bad), ParameterError);

    ExperimentConfig v;
    v.beta = {1.5};
    CHECK_THROWS_AS(v.validate(), ParameterError);
    v.beta = {};
    v.rho_db = {-3.0};
    CHECK_THROWS_AS(v.validate(), ParameterError);
    v.rho_db = {};
    v.d_min = 30.0;
    CHECK_THROWS_AS(v.validate(), ParameterError);

    CHECK_THROWS_AS(apply_config_file(c, "/nonexistent/uwbrake.cfg"), ParameterError);
}

TEST_CASE("decibel conversion", "[experiments]")
{
    CHECK(db_to_linear(10.0) == Approx(10.0).epsilon(1e-15));
    CHECK(db_to_linear(0.0) == 1.0);
    CHECK(linear_to_db(100.0) == Approx(20.0).epsilon(1e-15));
}

TEST_CASE("CSV formatting", "[experiments]")
{
    CHECK(csv_number(0.1) == "0.1");
    CHECK(csv_number(1.0 / 3.0) == "0.333333333333");
    CHECK(csv_number(std::size_t(42)) == "42");
    CHECK(csv_number(std::nan("")) == "nan");
    CHECK(csv_number(-INFINITY) == "-inf");

    CsvTable t;
    t.columns = {"a", "b"};
    t.add_row({"1", "2"});
    CHECK_THROWS(t.add_row({"1"}));
    std::ostringstream os;
    write_csv(os, t, "hello");
    CHECK(os.str() == "# hello\na,b\n1,2\n");
}

TEST_CASE("run description names the runner, seed and version", "[experiments]")
{
    ExperimentConfig c;
    c.seed = 17;
    const auto d = describe_run("apdp", c);
    CHECK(d.find("runner=apdp") != std::string::npos);
    CHECK(d.find("seed=17") != std::string::npos);
    CHECK(d.find(version_string()) != std::string::npos);
}

TEST_CASE("target SINR curve", "[experiments]")
{
    const auto r = run_gamma_curve(ExperimentConfig{});
    REQUIRE(r.table.rows.size() == 121);
    const auto s = column(r.table, "si_ratio"), g = column(r.table, "target_sinr");
    double prev = 0.0;
    for (const auto &row : r.table.rows)
    {
        const double gi = number(row[g]);
        CHECK(gi >= prev);
        CHECK(gi < number(row[s]));
        prev = gi;
    }
    CHECK(number(r.table.rows.front()[s]) == 1.0);
    CHECK(number(r.table.rows.back()[s]) == Approx(1e12));
}

TEST_CASE("aPDP runner", "[experiments]")
{
    auto c = small_config();
    const auto r = run_apdp(c);
    REQUIRE(r.table.rows.size() == 3 * 40);
    const auto p = column(r.table, "relative_power_db");
    CHECK(number(r.table.rows[0][p]) == 0.0);
    CHECK(number(r.table.rows[39][p]) == Approx(0.0).margin(1e-12));
    CHECK(number(r.table.rows[79][p]) == Approx(-10.0).epsilon(1e-12));
    CHECK(number(r.table.rows[119][p]) == Approx(-20.0).epsilon(1e-12));
}

TEST_CASE("mu and nu curves runner", "[experiments]")
{
    ExperimentConfig c;
    c.rho_db = {10.0};
    c.beta = {0.5, 1.0};
    const auto r = run_mu_nu_curves(c);
    REQUIRE(r.table.rows.size() == 3 * 2);
    const auto m = column(r.table, "mu"), n = column(r.table, "nu");
    CHECK(number(r.table.rows[0][m]) == Approx(mu(10.0, 0.5)).epsilon(1e-11));
    CHECK(number(r.table.rows[0][n]) == Approx(nu(10.0, 0.5, 0.25)).epsilon(1e-11));
    CHECK(number(r.table.rows[1][m]) == Approx(1.0).epsilon(1e-11));
}

TEST_CASE("outage probability versus frames", "[experiments]")
{
    auto c = small_config();
    c.rho_db = {0.0, 10.0};
    c.beta = {0.1};
    c.max_frames = 12;
    const auto r = run_po_vs_frames(c);
    REQUIRE(r.table.rows.size() == 2 * 12);
    const auto po = column(r.table, "po");
    for (std::size_t i = 0; i < r.table.rows.size(); ++i)
    {
        const double v = number(r.table.rows[i][po]);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        if (i % 12 != 0)
            CHECK(v <= number(r.table.rows[i - 1][po]));
    }
    CHECK(number(r.table.rows[0][po]) == 1.0);
}

TEST_CASE("utility versus channel gain runner", "[experiments]")
{
    auto c = small_config();
    c.beta = {1.0, 0.5};
    const auto r = run_utility_vs_gain(c);
    const auto rec = column(r.table, "record");
    const auto up = column(r.table, "utility_times_power");
    std::size_t points = 0, nmse_rows = 0;
    for (const auto &row : r.table.rows)
    {
        if (row[rec] == "point")
        {
            ++points;
            CHECK(number(row[up]) == Approx(1e5 * efficiency(number(row[column(r.table, "sinr")]), 100.0)).epsilon(1e-9));
        }
        else if (row[rec] == "nmse")
            ++nmse_rows;
    }
    CHECK(points == 2 * c.users);
    CHECK(nmse_rows == 2);
    const auto results = utility_nmse(c);
    REQUIRE(results.size() == 2);
    CHECK(results[0].loss_db == 0.0);
    CHECK(results[0].samples == c.trials * c.users);
    CHECK(results[0].nmse < results[1].nmse);
}

TEST_CASE("loss versus beta runner", "[experiments]")
{
    ExperimentConfig c;
    c.rho_db = {10.0};
    c.chips = {50};
    const auto r = run_loss_vs_beta(c);
    REQUIRE(r.table.rows.size() == 20);
    const auto l = column(r.table, "loss_db");
    CHECK(number(r.table.rows.back()[l]) == 0.0);
    CHECK(number(r.table.rows[9][l]) == Approx(loss_db(LsaParams::from_network(8, 200, 50, 20, 10.0, 0.5))).epsilon(1e-11));
}

TEST_CASE("runners are deterministic across thread counts", "[experiments]")
{
    auto c = small_config();
    c.rho_db = {10.0};
    c.beta = {0.3};
    c.threads = 1;
    const auto a = to_csv(run_po_vs_frames(c)) + to_csv(run_utility_vs_gain(c));
    c.threads = 3;
    const auto b = to_csv(run_po_vs_frames(c)) + to_csv(run_utility_vs_gain(c));
    CHECK(a == b);
    c.seed = 2;
    CHECK(to_csv(run_po_vs_frames(c)) + to_csv(run_utility_vs_gain(c)) != a);
}

TEST_CASE("command-line exit codes", "[experiments][cli]")
{
    CHECK(run_cli("--version") == 0);
    CHECK(run_cli("gamma-curve") == 0);
    CHECK(run_cli("apdp --paths 20 --rho-db 3 --rho-db 6") == 0);
    CHECK(run_cli("mu-nu --beta 1.5") == 1);
    CHECK(run_cli("loss-beta --colour red") == 1);
    CHECK(run_cli("") == 1);
    CHECK(run_cli("apdp --config /nonexistent.cfg") == 1);
    // An audit at a tiny path count misses its tolerances
    CHECK(run_cli("validate --audit-paths 20 --threads 1") == 2);
}

TEST_CASE("command line reads a configuration file and writes a file", "[experiments][cli]")
{
    const auto dir = std::filesystem::temp_directory_path();
    const auto cfg = dir / "uwbrake_test.cfg";
    const auto out = dir / "uwbrake_test.csv";
    {
        std::ofstream f(cfg);
        f << "paths = 10\nrho-db = 10\n";
    }
    REQUIRE(run_cli("apdp --config " + cfg.string() + " --out " + out.string()) == 0);
    std::ifstream in(out);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line))
        lines.push_back(line);
    REQUIRE(lines.size() == 12);
    CHECK(lines[0].rfind("# uwbrake", 0) == 0);
    CHECK(lines[1] == "rho_db,tap,normalized_delay,relative_power_db");
    CHECK(lines[11] == "10,10,1,-10");
    std::filesystem::remove(cfg);
    std::filesystem::remove(out);
}
