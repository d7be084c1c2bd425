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

#ifndef UWBRAKE_RAKE_HPP
#define UWBRAKE_RAKE_HPP

#include "uwbrake/channel.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace uwbrake
{

enum class Combining
{
    mrc
};

// Partial-Rake receiver that combines the first finger_count paths (all of them for an
// all-Rake receiver). finger_count = floor(beta * L), never less than one.
struct RakeSelector
{
    double finger_fraction = 1.0;
    std::size_t finger_count = 1;
    Combining combining = Combining::mrc;

    static RakeSelector partial(double finger_fraction, std::size_t path_count);
    static RakeSelector all(std::size_t path_count) { return partial(1.0, path_count); }

    bool is_all_rake(std::size_t path_count) const { return finger_count == path_count; }
};

// N_f frames of N_c chip positions each; N = N_f * N_c
struct SpreadingConfig
{
    std::size_t frames = 1;
    std::size_t chips_per_frame = 1;

    std::size_t processing_gain() const { return frames * chips_per_frame; }
    double load_factor(std::size_t path_count) const { return double(chips_per_frame) / double(path_count); }
    void validate() const;
};

// MRC weights c_k = G alpha_k: the first finger_count taps are kept, the rest zeroed
ComplexVector rake_weights(std::span<const Complex> alpha, const RakeSelector &selector);

// sqrt(min(L - tap, N_c) / N_c) for tap in 1..L-1
double phi_coefficient(std::size_t tap, std::size_t chips_per_frame, std::size_t path_count);

// Dense L x (L-1) upper-shift matrix built from a length-L vector: entry (l, i) (1-based)
// holds v_{L+l-i} when l <= i, zero otherwise.
struct ShiftMatrix
{
    std::size_t rows = 0;
    std::size_t cols = 0;
    ComplexVector data; // row-major

    Complex operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

ShiftMatrix shift_matrix(std::span<const Complex> v);

struct InterferenceMatrices
{
    ShiftMatrix path; // A_k, from alpha_k
    ShiftMatrix rake; // B_k, from c_k
};

InterferenceMatrices interference_matrices(std::span<const Complex> alpha, std::span<const Complex> weights);

// Gains of one receiver bank (one Rake per user) over one set of channel realizations.
struct LinkGains
{
    std::vector<double> h_sp;          // combined useful-signal gain per user
    std::vector<double> h_si;          // self-interference gain per user
    std::vector<double> h_mai;         // K x K row-major, entry (k, j) = h^MAI_kj, diagonal unused (0)
    double noise_variance = 0.0;       // sigma^2, watts
    std::vector<double> si_ratio;      // h_sp / h_si (+inf when h_si = 0)
    std::vector<double> mai_ratio_inv; // sum_{j != k} h^MAI_kj / h_sp_j

    std::size_t user_count() const { return h_sp.size(); }
    double mai(std::size_t k, std::size_t j) const { return h_mai[k * h_sp.size() + j]; }
};

// Builds a bank from raw gains and fills the derived ratios
LinkGains make_link_gains(std::vector<double> h_sp, std::vector<double> h_si, std::vector<double> h_mai,
                          double noise_variance);

// Banded evaluation of the gains, never materializing the shift matrices.
// Throws DegenerateChannelError when some h_sp is zero.
LinkGains link_gains(std::span<const ChannelRealization> channels, const RakeSelector &selector,
                     const SpreadingConfig &spreading, double noise_variance);

// Reference evaluation through explicit A, B and Phi matrices; O(K^2 L^2), meant for tests
LinkGains link_gains_dense(std::span<const ChannelRealization> channels, const RakeSelector &selector,
                           const SpreadingConfig &spreading, double noise_variance);

// SINR of user k at the Rake output for the given transmit powers
double sinr(const LinkGains &gains, std::span<const double> powers, std::size_t k);

} // namespace uwbrake

#endif
