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

#ifndef UWBRAKE_ERRORS_HPP
#define UWBRAKE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace uwbrake
{

// Invalid argument values (negative distances, beta outside (0,1], ...)
class ParameterError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Tap, user or region index outside its valid range
class IndexError : public std::out_of_range
{
public:
    using std::out_of_range::out_of_range;
};

// A user's combined signal gain h_sp is zero, so the SINR ratios are undefined
class DegenerateChannelError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Scalar root finder could not bracket or converge
class SolverError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Large-system prediction with a non-positive feasibility margin
class InfeasibleError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace uwbrake

#endif
