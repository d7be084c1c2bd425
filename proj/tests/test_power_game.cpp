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

#include "uwbrake/channel.hpp"
#include "uwbrake/errors.hpp"
#include "uwbrake/power_game.hpp"
#include "uwbrake/rake.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

using namespace uwbrake;
using Catch::Approx;

namespace
{

constexpr double M = 100.0;

// Root of exp(g/2) = 1 + (M/2) g on (1, 100) by plain bisection
double no_si_target_oracle()
{
    double lo = 1.0, hi = 100.0;
    for (int i = 0; i < 200; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        if (std::exp(mid / 2.0) - 1.0 - 50.0 * mid < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Target-SINR equation rearranged without f: (M/2) g (1 - g/s) - (exp(g/2) - 1)
double target_residual(double g, double s)
{
    return (M / 2.0) * g * (1.0 - g / s) - std::expm1(g / 2.0);
}

// Maximizer of u_k(p_k) with other powers fixed by golden-section search on log(p)
double golden_best_response(const LinkGains &g, std::vector<double> p, std::size_t k, const UtilityParams &up)
{
    auto neg_u = [&](double logp) {
        p[k] = std::exp(logp);
        return -utility(sinr(g, p, k), p[k], up);
    };
    double a = std::log(up.p_max) - 40.0, b = std::log(up.p_max);
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = neg_u(c), fd = neg_u(d);
    for (int i = 0; i < 300 && b - a > 1e-14; ++i)
    {
        if (fc < fd)
        {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = neg_u(c);
        }
        else
        {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = neg_u(d);
        }
    }
    return std::exp(0.5 * (a + b));
}

LinkGains random_bank(std::size_t K, std::size_t L, double rho, double beta, std::size_t Nc, std::size_t Nf,
                      std::uint64_t seed, double noise = 5e-16)
{
    RandomStream rng(seed);
    const auto topo = sample_topology(K, 3.0, 20.0, rng);
    const ApdpProfile p{L, rho};
    std::vector<ChannelRealization> chans;
    for (std::size_t k = 0; k < K; ++k)
        chans.push_back(sample_channel(p, topo, k, rng));
    return link_gains(chans, RakeSelector::partial(beta, L), SpreadingConfig{Nf, Nc}, noise);
}

} // namespace

TEST_CASE("efficiency function values", "[power-game]")
{
    CHECK(efficiency(0.0, M) == 0.0);
    CHECK(efficiency(std::numeric_limits<double>::infinity(), M) == 1.0);
    CHECK(efficiency(2.0 * std::log(100.0), M) == Approx(std::pow(0.99, 100.0)).epsilon(1e-13));
    CHECK(efficiency(2.0 * std::log(100.0), M) == Approx(0.36603).epsilon(1e-4));
    CHECK(efficiency(1e3, M) == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("efficiency derivative matches a finite difference", "[power-game]")
{
    for (double g : {1.0, 5.0, 10.0, 20.0})
    {
        const double h = 1e-5 * g;
        const double fd = (efficiency(g + h, M) - efficiency(g - h, M)) / (2.0 * h);
        CHECK(efficiency_derivative(g, M) == Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("target SINR without self-interference", "[power-game]")
{
    const double oracle = no_si_target_oracle();
    CHECK(oracle == Approx(12.95).margin(0.005));
    CHECK(gamma_star(1e12, M) == Approx(oracle).epsilon(1e-9));
    CHECK(gamma_star(std::numeric_limits<double>::infinity(), M) == Approx(oracle).epsilon(1e-12));
}

TEST_CASE("target SINR solves its equation and stays below the ratio", "[power-game]")
{
    double prev = 0.0;
    for (double s : {1.0, 2.0, 5.0, 10.0, 1e2, 1e3, 1e4})
    {
        const double g = gamma_star(s, M);
        INFO("si_ratio " << s << " target " << g);
        CHECK(g > 0.0);
        CHECK(g < s);
        CHECK(g >= prev);
        prev = g;
        // Residual relative to the size of the terms it balances
        CHECK(std::abs(target_residual(g, s)) <= 1e-10 * std::expm1(g / 2.0));
    }
}

TEST_CASE("target SINR rejects non-positive ratios", "[power-game]")
{
    CHECK_THROWS_AS(gamma_star(0.0, M), ParameterError);
    CHECK_THROWS_AS(gamma_star(-1.0, M), ParameterError);
}

TEST_CASE("gamma cache returns the solver value", "[power-game]")
{
    GammaCache cache(M);
    CHECK(cache(7.5) == gamma_star(7.5, M));
    CHECK(cache(7.5) == gamma_star(7.5, M));
}

TEST_CASE("utility parameters validation", "[power-game]")
{
    CHECK_NOTHROW(UtilityParams{}.validate());
    CHECK_THROWS_AS((UtilityParams{200.0, 100.0, 1e5, 1e-6}.validate()), ParameterError);
    CHECK_THROWS_AS((UtilityParams{100.0, 100.0, 0.0, 1e-6}.validate()), ParameterError);
    CHECK_THROWS_AS((UtilityParams{100.0, 100.0, 1e5, 0.0}.validate()), ParameterError);
}

TEST_CASE("utility is zero at zero power and unimodal", "[power-game]")
{
    const UtilityParams up;
    CHECK(utility(5.0, 0.0, up) == 0.0);

    for (std::uint64_t seed = 1; seed <= 5; ++seed)
    {
        const auto g = random_bank(3, 30, 10.0, 0.5, 15, 20, seed);
        std::vector<double> p{1e-9, 2e-9, 3e-9};
        const std::size_t k = seed % 3;
        const auto br = best_response(g, p, k, up);
        REQUIRE_FALSE(br.clamped);

        // Log-spaced sweep: increasing, then decreasing
        std::vector<double> u;
        std::vector<double> grid;
        for (int i = 0; i <= 400; ++i)
            grid.push_back(br.power * std::pow(10.0, -3.0 + 6.0 * i / 400.0));
        for (double x : grid)
        {
            p[k] = x;
            u.push_back(utility(sinr(g, p, k), x, up));
        }
        const auto peak = std::size_t(std::max_element(u.begin(), u.end()) - u.begin());
        for (std::size_t i = 1; i <= peak; ++i)
            CHECK(u[i] >= u[i - 1]);
        for (std::size_t i = peak + 1; i < u.size(); ++i)
            CHECK(u[i] <= u[i - 1]);
        CHECK(grid[peak] == Approx(br.power).epsilon(0.04));
    }
}

TEST_CASE("single-user best response without self-interference", "[power-game]")
{
    const auto g = make_link_gains({2e-3}, {0.0}, {0.0}, 1e-12);
    const auto br = best_response(g, std::vector<double>{0.0}, 0, UtilityParams{});
    CHECK_FALSE(br.clamped);
    CHECK(br.power == Approx(no_si_target_oracle() * 1e-12 / 2e-3).epsilon(1e-9));
}

TEST_CASE("best response matches the closed form with interference", "[power-game]")
{
    const auto g = make_link_gains({2e-3, 1e-3}, {1e-4, 2e-5}, {0.0, 3e-6, 4e-6, 0.0}, 1e-12);
    const std::vector<double> p{1e-7, 2e-7};
    const double G = gamma_star(20.0, M);
    const double expected = G * (3e-6 * 2e-7 + 1e-12) / (2e-3 * (1.0 - G / 20.0));
    const auto br = best_response(g, p, 0, UtilityParams{100, 100, 1e5, 1.0});
    CHECK(br.power == Approx(expected).epsilon(1e-12));
    auto q = p;
    q[0] = br.power;
    CHECK(sinr(g, q, 0) == Approx(G).epsilon(1e-10));
}

TEST_CASE("best response clamps at the power cap", "[power-game]")
{
    const auto g = make_link_gains({1e-6, 1e-6}, {0.0, 0.0}, {0.0, 1e-3, 1e-3, 0.0}, 1e-12);
    const auto br = best_response(g, std::vector<double>{0.0, 1e-6}, 0, UtilityParams{});
    CHECK(br.clamped);
    CHECK(br.power == 1e-6);
}

TEST_CASE("two-user equilibrium matches golden-section best responses", "[power-game]")
{
    const auto g = make_link_gains({1e-3, 1e-3}, {2e-5, 2e-5}, {0.0, 5e-6, 5e-6, 0.0}, 1e-12);
    const UtilityParams up;
    const auto out = solve_equilibrium(g, up);
    REQUIRE(out.converged);
    for (std::size_t k = 0; k < 2; ++k)
    {
        const double p = golden_best_response(g, out.powers, k, up);
        CHECK(std::abs(p - out.powers[k]) / out.powers[k] < 1e-6);
    }
    CHECK(out.powers[0] == Approx(out.powers[1]).epsilon(1e-12));
}

TEST_CASE("single user converges within two sweeps", "[power-game]")
{
    const auto g = make_link_gains({3e-4}, {1e-5}, {0.0}, 5e-16);
    const auto out = solve_equilibrium(g, UtilityParams{});
    CHECK(out.converged);
    CHECK(out.iterations <= 2);
    const double G = gamma_star(30.0, M);
    CHECK(out.powers[0] == Approx(G * 5e-16 / (3e-4 * (1.0 - G / 30.0))).epsilon(1e-12));
    CHECK(out.sinrs[0] == Approx(G).epsilon(1e-10));
    CHECK(out.utilities[0] == Approx(1e5 * efficiency(G, M) / out.powers[0]).epsilon(1e-12));
}

TEST_CASE("best-response powers are non-decreasing from zero", "[power-game]")
{
    const auto g = random_bank(6, 40, 10.0, 0.5, 20, 30, 4);
    const UtilityParams up;
    std::vector<double> p(6, 0.0);
    for (int sweep = 0; sweep < 200; ++sweep)
    {
        std::vector<double> next(6);
        for (std::size_t k = 0; k < 6; ++k)
            next[k] = best_response(g, p, k, up).power;
        for (std::size_t k = 0; k < 6; ++k)
            CHECK(next[k] >= p[k]);
        p = next;
    }
}

TEST_CASE("balanced instances match the reduced equilibrium power", "[power-game]")
{
    // Equal si_ratio and equal row sums of the received-power-normalized MAI matrix
    RandomStream rng(31);
    const double s = 40.0, z = 0.02, noise = 1e-14;
    const std::size_t K = 6;
    std::vector<double> hsp(K), hsi(K), hmai(K * K, 0.0);
    for (std::size_t k = 0; k < K; ++k)
    {
        hsp[k] = rng.uniform(1e-4, 1e-3);
        hsi[k] = hsp[k] / s;
    }
    for (std::size_t k = 0; k < K; ++k)
    {
        std::vector<double> w(K, 0.0);
        double sum = 0.0;
        for (std::size_t j = 0; j < K; ++j)
            if (j != k)
                sum += (w[j] = rng.uniform(0.1, 1.0));
        for (std::size_t j = 0; j < K; ++j)
            hmai[k * K + j] = w[j] * z / sum * hsp[j];
    }
    const auto g = make_link_gains(hsp, hsi, hmai, noise);
    const auto out = solve_equilibrium(g, UtilityParams{});
    REQUIRE(out.converged);
    CHECK_FALSE(out.any_clamped());
    for (std::size_t k = 0; k < K; ++k)
    {
        CHECK(feasibility(g, M)[k]);
        const double pred = reduced_equilibrium_power(g, k, M);
        CHECK(std::abs(out.powers[k] - pred) / pred < 1e-6);
    }
}

TEST_CASE("fixed point is stable under a further best response", "[power-game]")
{
    const auto g = random_bank(8, 60, 10.0, 0.3, 30, 40, 12);
    const UtilityParams up;
    const auto out = solve_equilibrium(g, up);
    REQUIRE(out.converged);
    REQUIRE_FALSE(out.any_clamped());
    for (std::size_t k = 0; k < 8; ++k)
    {
        const double p = best_response(g, out.powers, k, up).power;
        CHECK(std::abs(p - out.powers[k]) / out.powers[k] < 1e-9);
        CHECK(out.sinrs[k] == Approx(gamma_star(g.si_ratio[k], M)).epsilon(1e-8));
    }
}

TEST_CASE("infeasible instance clamps at least one user", "[power-game]")
{
    const auto g = make_link_gains({1e-3, 1e-3}, {0.0, 0.0}, {0.0, 0.2e-3, 0.2e-3, 0.0}, 1e-14);
    CHECK_FALSE(feasibility(g, M)[0]);
    CHECK(std::isinf(reduced_equilibrium_power(g, 0, M)));
    const auto out = solve_equilibrium(g, UtilityParams{});
    CHECK(out.any_clamped());
    for (double p : out.powers)
        CHECK(p <= UtilityParams{}.p_max);
}

TEST_CASE("feasibility flips with the number of frames", "[power-game]")
{
    // 8 users, 200 paths, 0 dB profile, 20 fingers, 50 chips per frame
    std::size_t feasible_short = 0, feasible_long = 0;
    const std::size_t trials = 20;
    for (std::size_t t = 0; t < trials; ++t)
    {
        auto all_ok = [](const std::vector<bool> &f) { return std::all_of(f.begin(), f.end(), [](bool b) { return b; }); };
        feasible_short += all_ok(feasibility(random_bank(8, 200, 1.0, 0.1, 50, 15, 500 + t), M));
        feasible_long += all_ok(feasibility(random_bank(8, 200, 1.0, 0.1, 50, 30, 500 + t), M));
    }
    CHECK(feasible_short <= trials / 4);
    CHECK(feasible_long >= 3 * trials / 4);
}

TEST_CASE("degenerate and invalid inputs", "[power-game]")
{
    const auto g = make_link_gains({1e-3}, {0.0}, {0.0}, 1e-12);
    CHECK_THROWS_AS(best_response(g, std::vector<double>{0.0, 0.0}, 0, UtilityParams{}), ParameterError);
    CHECK_THROWS_AS(solve_equilibrium(g, UtilityParams{}, SolverOptions{0.0, 10}), ParameterError);
}
