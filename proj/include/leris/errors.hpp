// SPDX-License-Identifier: Apache-2.0
//
// leris-sim: light-emitting RIS localization and mmWave link simulator
// Copyright (C) 2026 The leris-sim authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace leris
{

// Error classes map one-to-one onto CLI exit codes (see cli.hpp).
enum class ErrorKind
{
    argument,
    degenerate_geometry,
    infeasible_ratio,
    inconsistent_ranges,
    ambiguous_solution,
    ill_conditioned,
    insufficient_anchors,
    noise_dominated,
    quadrature,
    configuration,
    validation,
    io,
    unknown,
};

const char *to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error
{
public:
    using Diagnostics = std::vector<std::pair<std::string, double>>;

    Error(ErrorKind kind, const std::string &what, Diagnostics diagnostics = {})
        : std::runtime_error(what), kind_(kind), diagnostics_(std::move(diagnostics)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const Diagnostics &diagnostics() const noexcept { return diagnostics_; }

private:
    ErrorKind kind_;
    Diagnostics diagnostics_;
};

struct ArgumentError : Error
{
    explicit ArgumentError(const std::string &what) : Error(ErrorKind::argument, what) {}
};

struct DegenerateGeometryError : Error
{
    explicit DegenerateGeometryError(const std::string &what) : Error(ErrorKind::degenerate_geometry, what) {}
};

// Ratio of mode powers that does not correspond to any non-negative distance.
struct InfeasibleRatioError : Error
{
    InfeasibleRatioError(const std::string &what, double raw_ratio)
        : Error(ErrorKind::infeasible_ratio, what, {{"raw_ratio", raw_ratio}}), raw_ratio(raw_ratio) {}
    double raw_ratio;
};

struct InconsistentRangesError : Error
{
    InconsistentRangesError(const std::string &what, double discriminant)
        : Error(ErrorKind::inconsistent_ranges, what, {{"discriminant", discriminant}}) {}
};

struct AmbiguousSolutionError : Error
{
    explicit AmbiguousSolutionError(const std::string &what) : Error(ErrorKind::ambiguous_solution, what) {}
};

struct IllConditionedError : Error
{
    IllConditionedError(const std::string &what, double determinant, double condition_number)
        : Error(ErrorKind::ill_conditioned, what, {{"determinant", determinant}, {"condition_number", condition_number}}),
          condition_number(condition_number) {}
    double condition_number;
};

struct InsufficientAnchorsError : Error
{
    InsufficientAnchorsError(const std::string &what, std::size_t usable)
        : Error(ErrorKind::insufficient_anchors, what, {{"usable_anchors", static_cast<double>(usable)}}) {}
};

struct NoiseDominatedError : Error
{
    NoiseDominatedError(const std::string &what, double radicand)
        : Error(ErrorKind::noise_dominated, what, {{"radicand", radicand}}) {}
};

struct QuadratureError : Error
{
    QuadratureError(const std::string &what, double relative_change)
        : Error(ErrorKind::quadrature, what, {{"relative_change", relative_change}}) {}
};

struct ConfigError : Error
{
    explicit ConfigError(const std::string &what) : Error(ErrorKind::configuration, what) {}
};

struct ValidationError : Error
{
    ValidationError(const std::string &what, std::vector<std::string> violations)
        : Error(ErrorKind::validation, what), violations(std::move(violations)) {}
    std::vector<std::string> violations;
};

struct IoError : Error
{
    explicit IoError(const std::string &what) : Error(ErrorKind::io, what) {}
};

} // namespace leris
