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

// Seeded, draw-parallel Monte Carlo harness. Each draw owns a generator seeded
// from (seed, draw index) and writes into its own output slot; reductions run
// afterwards in index order, so results do not depend on the worker count.

#pragma once

#include "leris/errors.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <vector>

namespace leris
{

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

// Pairwise (cascade) summation in the given order.
double pairwise_sum(std::span<const double> values);

struct Aggregate
{
    double mean = 0.0;
    double p5 = 0.0;
    double p50 = 0.0;
    double p95 = 0.0;
    double std_error = 0.0;
    std::int64_t n = 0;
};

// NaN entries are skipped. Percentiles interpolate linearly between order
// statistics. All fields are NaN when no finite sample remains.
Aggregate aggregate(std::span<const double> values);

// Writes `out.size()` results for one draw. Throwing marks the whole draw as
// failed.
using DrawKernel = std::function<void(std::int64_t index, std::mt19937_64 &rng, std::span<double> out)>;

struct MonteCarloResult
{
    std::int64_t iterations = 0;
    std::size_t width = 0;
    std::vector<double> samples; // draw-major, NaN for failed draws
    std::vector<Aggregate> aggregates;
    std::int64_t failed_draws = 0;
    std::map<ErrorKind, std::int64_t> failures_by_kind;

    std::span<const double> draw(std::int64_t i) const
    {
        return std::span<const double>(samples).subspan(static_cast<std::size_t>(i) * width, width);
    }
    std::vector<double> column(std::size_t c) const;
};

// workers <= 0 uses the OpenMP default.
MonteCarloResult monte_carlo(std::int64_t iterations, std::uint64_t seed, int workers, std::size_t width,
                             const DrawKernel &kernel);

} // namespace leris
