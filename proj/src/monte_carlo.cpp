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

#include "leris/monte_carlo.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace leris
{

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index)
{
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

double pairwise_sum(std::span<const double> values)
{
    constexpr std::size_t block = 16;
    if (values.size() <= block)
    {
        double s = 0.0;
        for (double v : values)
            s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Aggregate aggregate(std::span<const double> values)
{
    std::vector<double> v;
    v.reserve(values.size());
    for (double x : values)
        if (!std::isnan(x))
            v.push_back(x);
    Aggregate a;
    a.n = static_cast<std::int64_t>(v.size());
    if (v.empty())
    {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        a.mean = a.p5 = a.p50 = a.p95 = a.std_error = nan;
        return a;
    }
    const double n = static_cast<double>(v.size());
    a.mean = pairwise_sum(v) / n;
    if (v.size() > 1)
    {
        std::vector<double> dev(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            dev[i] = (v[i] - a.mean) * (v[i] - a.mean);
        a.std_error = std::sqrt(pairwise_sum(dev) / (n - 1.0) / n);
    }
    std::sort(v.begin(), v.end());
    auto pct = [&v](double p) {
        const double pos = p * static_cast<double>(v.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, v.size() - 1);
        const double f = pos - static_cast<double>(lo);
        return f == 0.0 ? v[lo] : v[lo] + f * (v[hi] - v[lo]);
    };
    a.p5 = pct(0.05);
    a.p50 = pct(0.50);
    a.p95 = pct(0.95);
    return a;
}

std::vector<double> MonteCarloResult::column(std::size_t c) const
{
    std::vector<double> out(static_cast<std::size_t>(iterations));
    for (std::int64_t i = 0; i < iterations; ++i)
        out[static_cast<std::size_t>(i)] = samples[static_cast<std::size_t>(i) * width + c];
    return out;
}

MonteCarloResult monte_carlo(std::int64_t iterations, std::uint64_t seed, int workers, std::size_t width,
                             const DrawKernel &kernel)
{
    if (iterations < 1)
        throw ArgumentError("iterations must be at least 1");
    if (width < 1)
        throw ArgumentError("kernel must produce at least one value per draw");
    if (!kernel)
        throw ArgumentError("missing draw kernel");

    MonteCarloResult r;
    r.iterations = iterations;
    r.width = width;
    r.samples.assign(static_cast<std::size_t>(iterations) * width, std::numeric_limits<double>::quiet_NaN());
    // 0 = ok, otherwise 1 + ErrorKind
    std::vector<int> status(static_cast<std::size_t>(iterations), 0);
    const int threads = workers > 0 ? workers : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
    for (std::int64_t i = 0; i < iterations; ++i)
    {
        std::mt19937_64 rng(substream_seed(seed, static_cast<std::uint64_t>(i)));
        std::vector<double> out(width, std::numeric_limits<double>::quiet_NaN());
        try
        {
            kernel(i, rng, out);
            std::copy(out.begin(), out.end(), r.samples.begin() + static_cast<std::ptrdiff_t>(i * width));
        }
        catch (const Error &e)
        {
            status[static_cast<std::size_t>(i)] = 1 + static_cast<int>(e.kind());
        }
        catch (const std::exception &)
        {
            status[static_cast<std::size_t>(i)] = 1 + static_cast<int>(ErrorKind::unknown);
        }
    }

    for (int s : status)
        if (s != 0)
        {
            ++r.failed_draws;
            ++r.failures_by_kind[static_cast<ErrorKind>(s - 1)];
        }
    r.aggregates.reserve(width);
    for (std::size_t c = 0; c < width; ++c)
        r.aggregates.push_back(aggregate(r.column(c)));
    return r;
}

} // namespace leris
