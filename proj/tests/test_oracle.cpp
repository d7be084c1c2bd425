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
#include "uwbrake/lsa.hpp"
#include "uwbrake/oracle.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

using namespace uwbrake;
using Catch::Approx;

namespace
{

double rel_diff(double a, double b)
{
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

} // namespace

TEST_CASE("profile matrices invariants", "[oracle]")
{
    const auto pm = profile_matrices(50, 10.0, 0.3, 2.0);
    REQUIRE(pm.finger_count == 15);
    for (std::size_t l = 0; l < 50; ++l)
    {
        CHECK(pm.variance[l] == Approx(2.0 * std::pow(10.0, -double(l) / 49.0)).epsilon(1e-13));
        CHECK(pm.path_profile[l] == Approx(std::sqrt(pm.variance[l])).epsilon(1e-15));
        CHECK(pm.rake_profile[l] == (l < 15 ? pm.path_profile[l] : 0.0));
        CHECK(pm.step[l] == (l < 15 ? 1.0 : 0.0));
        CHECK(pm.path_c_diag[l] >= 0.0);
        CHECK(pm.rake_c_diag[l] >= 0.0);
    }
    // theta_sq(l, m) = v_l v_m (u_l + u_m)^2
    CHECK(pm.theta_sq(1, 2) == Approx(4.0 * pm.variance[0] * pm.variance[1]).epsilon(1e-14));
    CHECK(pm.theta_sq(1, 40) == Approx(pm.variance[0] * pm.variance[39]).epsilon(1e-14));
    CHECK(pm.theta_sq(30, 40) == 0.0);
}

TEST_CASE("both summation orders of the SI sum agree", "[oracle]")
{
    for (std::size_t L : {std::size_t(2), std::size_t(7), std::size_t(64), std::size_t(301)})
        for (double rho : {1.0, 10.0, 100.0})
            for (double beta : {0.05, 0.3, 0.5, 0.77, 1.0})
                for (double lambda : {0.1, 0.5, 0.9, 1.0, 2.5})
                {
                    const double a = finite_nu(L, rho, beta, lambda);
                    const double b = finite_nu_case_table(L, rho, beta, lambda);
                    INFO("L " << L << " rho " << rho << " beta " << beta << " lambda " << lambda);
                    CHECK(rel_diff(a, b) < 1e-12);
                }
    CHECK_NOTHROW(finite_si_inv(400, 100.0, 10.0, 0.5, 0.25));
    CHECK(finite_si_inv(400, 100.0, 10.0, 0.5, 0.25) == Approx(finite_nu(400, 10.0, 0.5, 0.25) / 100.0).epsilon(1e-14));
}

TEST_CASE("flat all-Rake SI scaling converges to 2/3 at unit load", "[oracle]")
{
    double prev = 1.0;
    for (std::size_t L : {std::size_t(50), std::size_t(200), std::size_t(800), std::size_t(3200)})
    {
        const double err = std::abs(finite_nu(L, 1.0, 1.0, 1.0) - 2.0 / 3.0);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("finite-L MAI scaling", "[oracle]")
{
    CHECK(rel_diff(finite_mu(4000, 10.0, 0.5), mu(10.0, 0.5)) < 0.01);
    CHECK(finite_mai_inv(400, 8, 100.0, 10.0, 0.5) == Approx(7.0 / 100.0 * finite_mu(400, 10.0, 0.5)).epsilon(1e-14));
    // Flat all-Rake: tends to 1 with O(1/L) error
    CHECK(std::abs(finite_mu(1000, 1.0, 1.0) - 1.0) < 5e-3);
}

TEST_CASE("finite SI sum sits on the boundary value between regions", "[oracle]")
{
    // beta = 0.5 and lambda = 0.5: the low- and high-load branches meet
    const double lo = nu_branch(NuRegion::low_load, 10.0, 0.5, 0.5);
    const double hi = nu_branch(NuRegion::high_load, 10.0, 0.5, 0.5);
    const double finite = finite_nu(4000, 10.0, 0.5, 0.5);
    CHECK(rel_diff(finite, lo) < 0.01);
    CHECK(rel_diff(finite, hi) < 0.01);
}

TEST_CASE("intermediate sums against their closed forms", "[oracle]")
{
    const double rho = 10.0, beta = 0.3;
    const auto s = finite_sums(4000, rho, beta, 0.2);
    // (rho^beta - 1) / (rho^beta ln rho), derived independently here
    const double den = (std::pow(rho, beta) - 1.0) / (std::pow(rho, beta) * std::log(rho));
    CHECK(rel_diff(s.mai_den, den) < 0.005);
    CHECK(closed_mai_den(rho, beta) == Approx(den).epsilon(1e-13));
    CHECK(s.si_den == Approx(s.mai_den * s.mai_den).epsilon(1e-14));
    CHECK(rel_diff(s.gain_num, (1.0 - 1.0 / rho) / std::log(rho)) < 0.005);
    CHECK(s.mu == Approx((s.mai_num_rake + s.mai_num_path) / (s.mai_den * s.mai_den)).epsilon(1e-14));
    CHECK(s.gain_ratio == Approx(s.gain_num / s.mai_den).epsilon(1e-14));

    // Flat profile: every term is equal on the fingers
    const auto f = finite_sums(1000, 1.0, 0.5, 0.2);
    CHECK(f.mai_den == Approx(0.5).epsilon(1e-13));
    CHECK(f.si_den == Approx(0.25).epsilon(1e-13));
    CHECK(closed_si_den(1.0, 0.5) == 0.25);
    CHECK(closed_mai_num_rake(1.0, 0.5) == Approx(0.125).epsilon(1e-14));
    CHECK(closed_mai_num_path(1.0, 0.5) == Approx(0.375).epsilon(1e-14));
    CHECK(closed_gain_num(1.0) == 1.0);
}

TEST_CASE("intermediate sums report", "[oracle]")
{
    const auto rows = appendix_intermediates(4000, 10.0, 0.3, 0.2);
    std::map<std::string, int> seen;
    for (const auto &r : rows)
    {
        ++seen[r.quantity];
        if (r.gating)
        {
            INFO(r.quantity << " finite " << r.finite << " closed " << r.closed);
            CHECK(r.pass);
        }
    }
    for (const char *q : {"mai_den_user_k", "mai_den_user_j", "mai_num_rake_tail", "mai_num_path_tail", "mai_ratio",
                          "si_den", "si_num_low_load", "gain_ratio_num", "gain_ratio"})
        CHECK(seen[q] == 1);
}

TEST_CASE("Monte Carlo estimates agree with the finite sums", "[oracle][statistics]")
{
    McConfig cfg; // L = 400, K = 8, N_c = 100, rho = 10, beta = 0.5, 200 trials
    cfg.threads = 1;
    const auto est = monte_carlo_estimates(cfg);
    const double N = 100.0;
    const double lambda = 0.25;
    CHECK(est.mai_inv.trials == 200);
    CHECK(rel_diff(est.mai_inv.mean, finite_mai_inv(400, 8, N, 10.0, 0.5)) < 0.05);
    CHECK(rel_diff(est.si_inv.mean, finite_si_inv(400, N, 10.0, 0.5, lambda)) < 0.05);
    CHECK(est.mai_inv.std_error > 0.0);

    McConfig ratio = cfg;
    ratio.trials = 500;
    CHECK(rel_diff(monte_carlo_estimates(ratio).gain_ratio.mean, mu(10.0, 0.5)) < 0.05);
}

TEST_CASE("Monte Carlo estimates do not depend on the thread count", "[oracle]")
{
    McConfig cfg;
    cfg.path_count = 60;
    cfg.chips_per_frame = 20;
    cfg.trials = 20;
    cfg.threads = 1;
    const auto a = monte_carlo_estimates(cfg);
    cfg.threads = 3;
    const auto b = monte_carlo_estimates(cfg);
    CHECK(a.mai_inv.mean == b.mai_inv.mean);
    CHECK(a.si_inv.mean == b.si_inv.mean);
    CHECK(a.gain_ratio.mean == b.gain_ratio.mean);
}

TEST_CASE("convergence tables", "[oracle]")
{
    const std::vector<std::size_t> grid{50, 200, 800, 3200};
    const auto t = convergence_table(ConvergenceQuantity::mu, grid, 10.0, 0.5, 0.25);
    REQUIRE(t.size() == 4);
    for (std::size_t i = 0; i < t.size(); ++i)
    {
        CHECK(t[i].path_count == grid[i]);
        CHECK(t[i].closed == Approx(mu(10.0, 0.5)).epsilon(1e-14));
        if (i > 0)
            CHECK(t[i].rel_err <= t[i - 1].rel_err);
    }
    // Exact at every L where beta L is an integer on a flat profile
    for (const auto &row : convergence_table(ConvergenceQuantity::mai_den, grid, 1.0, 0.5, 0.25))
        CHECK(row.rel_err < 1e-10);
    for (const auto &row : convergence_table(ConvergenceQuantity::gain_ratio, grid, 1.0, 0.5, 0.25))
        CHECK(row.rel_err < 1e-10);

    CHECK_THROWS_AS(convergence_table(ConvergenceQuantity::mu, {200, 100}, 10.0, 0.5, 0.25), ParameterError);
    for (auto q : {ConvergenceQuantity::mu, ConvergenceQuantity::nu, ConvergenceQuantity::gain_ratio})
        CHECK(parse_convergence_quantity(to_string(q)) == q);
    CHECK_THROWS_AS(parse_convergence_quantity("bogus"), ParameterError);
}

TEST_CASE("audit rows", "[oracle]")
{
    const auto row = make_audit_row("x", "p", 1.01, 1.0, 0.02);
    CHECK(row.rel_err == Approx(0.01).epsilon(1e-12));
    CHECK(row.pass);
    CHECK_FALSE(make_audit_row("x", "p", 1.1, 1.0, 0.02).pass);
    CHECK_FALSE(make_audit_row("x", "p", std::nan(""), 1.0, 0.02).pass);

    AuditRow failing_optional = make_audit_row("y", "p", 2.0, 1.0, 0.01, false);
    CHECK(audit_passed({row, failing_optional}));
    CHECK_FALSE(audit_passed({row, make_audit_row("z", "p", 2.0, 1.0, 0.01)}));
}

TEST_CASE("audit lists every intermediate exactly once", "[oracle]")
{
    AuditOptions opt;
    opt.path_count = 1000;
    opt.monte_carlo = false;
    const auto rows = full_audit(opt);
    std::map<std::string, int> seen;
    for (const auto &r : rows)
        ++seen[r.quantity];
    for (const char *q :
         {"mai_den_user_k", "mai_den_user_j", "mai_num_rake_tail", "mai_num_path_tail", "mai_ratio", "si_den",
          "si_num_low_load", "si_num_mid_load_sparse", "si_num_mid_load_dense", "si_num_high_load",
          "si_num_full_load", "gain_ratio_num", "gain_ratio"})
    {
        INFO(q);
        CHECK(seen[q] == 1);
    }
    for (const char *q : {"nu_low_load", "nu_mid_load_sparse", "nu_mid_load_dense", "nu_high_load", "nu_full_load"})
        CHECK(seen[q] >= 2);
    CHECK(seen.count("mc_mai_inv") == 0);
}
