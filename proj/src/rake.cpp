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

#include "uwbrake/rake.hpp"
#include "uwbrake/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace uwbrake
{

namespace
{

// conj(p) * q accumulated without going through the NaN-checking complex multiply
struct ConjDot
{
    double re = 0.0;
    double im = 0.0;

    void add(const Complex &p, const Complex &q)
    {
        re += p.real() * q.real() + p.imag() * q.imag();
        im += p.real() * q.imag() - p.imag() * q.real();
    }
    double norm() const { return re * re + im * im; }
};

// sum_{t < count} conj(x[t + shift]) * y[t]
ConjDot lagged_dot(std::span<const Complex> x, std::span<const Complex> y, std::size_t shift, std::size_t count)
{
    ConjDot acc;
    for (std::size_t t = 0; t < count; ++t)
        acc.add(x[t + shift], y[t]);
    return acc;
}

std::size_t checked_path_count(std::span<const ChannelRealization> channels)
{
    if (channels.empty())
        throw ParameterError("link gains need at least one user");
    const std::size_t L = channels.front().path_count();
    if (L == 0)
        throw ParameterError("channel realizations must have at least one path");
    for (const auto &ch : channels)
        if (ch.path_count() != L)
            throw ParameterError("all users must share the same number of paths");
    return L;
}

double signal_gain(std::span<const Complex> weights, std::span<const Complex> alpha)
{
    ConjDot d;
    for (std::size_t l = 0; l < alpha.size(); ++l)
        d.add(weights[l], alpha[l]);
    if (std::abs(d.im) > 1e-12 * std::abs(d.re) + std::numeric_limits<double>::min())
        throw std::logic_error("MRC signal gain has a non-negligible imaginary part");
    return d.re;
}

void check_inputs(const RakeSelector &selector, const SpreadingConfig &spreading, double noise_variance,
                  std::size_t path_count)
{
    spreading.validate();
    if (selector.finger_count < 1 || selector.finger_count > path_count)
        throw ParameterError("finger count must lie in 1..L");
    if (!(noise_variance >= 0.0))
        throw ParameterError("noise variance must be non-negative");
}

} // namespace

RakeSelector RakeSelector::partial(double finger_fraction, std::size_t path_count)
{
    if (!(finger_fraction > 0.0 && finger_fraction <= 1.0))
        throw ParameterError("finger fraction must lie in (0, 1]");
    if (path_count == 0)
        throw ParameterError("path count must be positive");

    // Guard against beta * L landing a hair below an integer (0.3 * 200 = 59.999...)
    const double exact = finger_fraction * double(path_count);
    auto fingers = std::size_t(std::floor(exact + 1e-9));
    fingers = std::clamp<std::size_t>(fingers, 1, path_count);
    return RakeSelector{finger_fraction, fingers, Combining::mrc};
}

void SpreadingConfig::validate() const
{
    if (frames == 0 || chips_per_frame == 0)
        throw ParameterError("frames and chips per frame must be positive");
}

ComplexVector rake_weights(std::span<const Complex> alpha, const RakeSelector &selector)
{
    ComplexVector c(alpha.size(), Complex(0.0, 0.0));
    const std::size_t n = std::min(selector.finger_count, alpha.size());
    std::copy_n(alpha.begin(), n, c.begin());
    return c;
}

double phi_coefficient(std::size_t tap, std::size_t chips_per_frame, std::size_t path_count)
{
    if (chips_per_frame == 0)
        throw ParameterError("chips per frame must be positive");
    if (tap < 1 || tap + 1 > path_count)
        throw IndexError("phi index " + std::to_string(tap) + " outside 1..L-1");
    const double m = double(std::min(path_count - tap, chips_per_frame));
    return std::sqrt(m / double(chips_per_frame));
}

ShiftMatrix shift_matrix(std::span<const Complex> v)
{
    const std::size_t L = v.size();
    ShiftMatrix m;
    m.rows = L;
    m.cols = L > 0 ? L - 1 : 0;
    m.data.assign(m.rows * m.cols, Complex(0.0, 0.0));
    // 1-based: (l, i) -> v_{L+l-i} for l <= i; 0-based: (r, c) -> v[L - 1 + r - c] for r <= c
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = r; c < m.cols; ++c)
            m.data[r * m.cols + c] = v[L - 1 + r - c];
    return m;
}

InterferenceMatrices interference_matrices(std::span<const Complex> alpha, std::span<const Complex> weights)
{
    if (alpha.size() != weights.size())
        throw ParameterError("path gains and Rake weights must have the same length");
    return {shift_matrix(alpha), shift_matrix(weights)};
}

LinkGains make_link_gains(std::vector<double> h_sp, std::vector<double> h_si, std::vector<double> h_mai,
                          double noise_variance)
{
    const std::size_t K = h_sp.size();
    if (K == 0 || h_si.size() != K || h_mai.size() != K * K)
        throw ParameterError("inconsistent gain dimensions");
    if (!(noise_variance >= 0.0))
        throw ParameterError("noise variance must be non-negative");

    for (std::size_t k = 0; k < K; ++k)
    {
        if (!(h_sp[k] > 0.0))
            throw DegenerateChannelError("user " + std::to_string(k) + " has zero combined signal gain");
        if (!(h_si[k] >= 0.0))
            throw ParameterError("self-interference gains must be non-negative");
        for (std::size_t j = 0; j < K; ++j)
            if (!(h_mai[k * K + j] >= 0.0))
                throw ParameterError("MAI gains must be non-negative");
        h_mai[k * K + k] = 0.0;
    }

    LinkGains g;
    g.si_ratio.resize(K);
    g.mai_ratio_inv.assign(K, 0.0);
    for (std::size_t k = 0; k < K; ++k)
    {
        g.si_ratio[k] = h_si[k] > 0.0 ? h_sp[k] / h_si[k] : std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < K; ++j)
            if (j != k)
                g.mai_ratio_inv[k] += h_mai[k * K + j] / h_sp[j];
    }
    g.h_sp = std::move(h_sp);
    g.h_si = std::move(h_si);
    g.h_mai = std::move(h_mai);
    g.noise_variance = noise_variance;
    return g;
}

LinkGains link_gains(std::span<const ChannelRealization> channels, const RakeSelector &selector,
                     const SpreadingConfig &spreading, double noise_variance)
{
    const std::size_t L = checked_path_count(channels);
    check_inputs(selector, spreading, noise_variance, L);

    const std::size_t K = channels.size();
    const std::size_t Lp = selector.finger_count;
    const double N = double(spreading.processing_gain());
    const double Nc = double(spreading.chips_per_frame);

    std::vector<ComplexVector> weights(K);
    for (std::size_t k = 0; k < K; ++k)
        weights[k] = rake_weights(channels[k].gains, selector);

    // phi^2 for lag s = L - i
    std::vector<double> phi_sq(L, 0.0);
    for (std::size_t s = 1; s < L; ++s)
        phi_sq[s] = std::min(double(s), Nc) / Nc;

    std::vector<double> h_sp(K), h_si(K), h_mai(K * K, 0.0);
    for (std::size_t k = 0; k < K; ++k)
    {
        const std::span<const Complex> a = channels[k].gains;
        const std::span<const Complex> c = weights[k];
        h_sp[k] = signal_gain(c, a);
        if (!(h_sp[k] > 0.0))
            throw DegenerateChannelError("user " + std::to_string(k) + " has zero combined signal gain");

        double si = 0.0;
        for (std::size_t s = 1; s < L; ++s)
        {
            // (B^H alpha)_i + (A^H c)_i, with c zero beyond Lp
            ConjDot v = lagged_dot(c, a, s, Lp > s ? Lp - s : 0);
            const ConjDot w = lagged_dot(a, c, s, std::min(Lp, L - s));
            v.re += w.re;
            v.im += w.im;
            si += phi_sq[s] * v.norm();
        }
        h_si[k] = si / (N * h_sp[k]);
    }

    for (std::size_t k = 0; k < K; ++k)
    {
        const std::span<const Complex> c = weights[k];
        for (std::size_t j = 0; j < K; ++j)
        {
            if (j == k)
                continue;
            const std::span<const Complex> b = channels[j].gains;
            double num = lagged_dot(c, b, 0, Lp).norm();
            for (std::size_t s = 1; s < L; ++s)
            {
                num += lagged_dot(c, b, s, Lp > s ? Lp - s : 0).norm();
                num += lagged_dot(b, c, s, std::min(Lp, L - s)).norm();
            }
            h_mai[k * K + j] = num / (N * h_sp[k]);
        }
    }

    return make_link_gains(std::move(h_sp), std::move(h_si), std::move(h_mai), noise_variance);
}

LinkGains link_gains_dense(std::span<const ChannelRealization> channels, const RakeSelector &selector,
                           const SpreadingConfig &spreading, double noise_variance)
{
    const std::size_t L = checked_path_count(channels);
    check_inputs(selector, spreading, noise_variance, L);

    const std::size_t K = channels.size();
    const double N = double(spreading.processing_gain());

    std::vector<double> phi(L > 0 ? L - 1 : 0);
    for (std::size_t i = 1; i < L; ++i)
        phi[i - 1] = phi_coefficient(i, spreading.chips_per_frame, L);

    std::vector<ComplexVector> weights(K);
    std::vector<InterferenceMatrices> mats;
    mats.reserve(K);
    for (std::size_t k = 0; k < K; ++k)
    {
        weights[k] = rake_weights(channels[k].gains, selector);
        mats.push_back(interference_matrices(channels[k].gains, weights[k]));
    }

    // M^H x for an L x (L-1) matrix M
    auto herm_times = [L](const ShiftMatrix &m, std::span<const Complex> x) {
        ComplexVector y(m.cols, Complex(0.0, 0.0));
        for (std::size_t r = 0; r < L; ++r)
            for (std::size_t c = 0; c < m.cols; ++c)
                y[c] += std::conj(m(r, c)) * x[r];
        return y;
    };
    auto sq_norm = [](const ComplexVector &v) {
        double s = 0.0;
        for (const auto &x : v)
            s += std::norm(x);
        return s;
    };
    auto inner = [](std::span<const Complex> u, std::span<const Complex> v) {
        Complex s(0.0, 0.0);
        for (std::size_t l = 0; l < u.size(); ++l)
            s += std::conj(u[l]) * v[l];
        return s;
    };

    std::vector<double> h_sp(K), h_si(K), h_mai(K * K, 0.0);
    for (std::size_t k = 0; k < K; ++k)
    {
        const auto &a = channels[k].gains;
        h_sp[k] = inner(weights[k], a).real();
        if (!(h_sp[k] > 0.0))
            throw DegenerateChannelError("user " + std::to_string(k) + " has zero combined signal gain");

        auto v = herm_times(mats[k].rake, a);
        const auto w = herm_times(mats[k].path, weights[k]);
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = phi[i] * (v[i] + w[i]);
        h_si[k] = sq_norm(v) / (N * h_sp[k]);

        for (std::size_t j = 0; j < K; ++j)
        {
            if (j == k)
                continue;
            const auto &b = channels[j].gains;
            const double num = sq_norm(herm_times(mats[k].rake, b)) + sq_norm(herm_times(mats[j].path, weights[k])) +
                               std::norm(inner(weights[k], b));
            h_mai[k * K + j] = num / (N * h_sp[k]);
        }
    }

    return make_link_gains(std::move(h_sp), std::move(h_si), std::move(h_mai), noise_variance);
}

double sinr(const LinkGains &gains, std::span<const double> powers, std::size_t k)
{
    const std::size_t K = gains.user_count();
    if (powers.size() != K)
        throw ParameterError("power vector length must equal the number of users");
    if (k >= K)
        throw IndexError("user index out of range");

    double interference = gains.noise_variance + gains.h_si[k] * powers[k];
    for (std::size_t j = 0; j < K; ++j)
        if (j != k)
            interference += gains.mai(k, j) * powers[j];
    if (interference <= 0.0)
        return powers[k] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    return gains.h_sp[k] * powers[k] / interference;
}

} // namespace uwbrake
