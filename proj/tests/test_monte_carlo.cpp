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

#include "doctest.h"

#include <cmath>
#include <limits>
#include <numeric>

using namespace leris;
using doctest::Approx;

namespace
{

void noisy_kernel(std::int64_t index, std::mt19937_64 &rng, std::span<double> out)
{
    std::normal_distribution<double> g(1.0, 2.0);
    out[0] = g(rng);
    out[1] = static_cast<double>(index);
    if (index % 7 == 3)
        out[2] = std::numeric_limits<double>::quiet_NaN();
    else
        out[2] = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

} // namespace

TEST_CASE("splitmix64 reference values")
{
    // first outputs of the published splitmix64 generator seeded with 0
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
    CHECK(splitmix64(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
    CHECK(substream_seed(1, 0) != substream_seed(1, 1));
    CHECK(substream_seed(1, 5) == substream_seed(1, 5));
    CHECK(substream_seed(2, 5) != substream_seed(1, 5));
}

TEST_CASE("pairwise sum")
{
    std::vector<double> v(1000);
    std::iota(v.begin(), v.end(), 1.0);
    CHECK(pairwise_sum(v) == 500500.0);
    CHECK(pairwise_sum(std::span<const double>{}) == 0.0);
    std::vector<double> tenths(100000, 0.1);
    CHECK(std::abs(pairwise_sum(tenths) - 10000.0) < 1e-9);
}

TEST_CASE("aggregate statistics")
{
    const std::vector<double> v{5, 1, 4, 2, 3};
    const Aggregate a = aggregate(v);
    CHECK(a.n == 5);
    CHECK(a.mean == Approx(3.0));
    CHECK(a.p50 == Approx(3.0));
    CHECK(a.p5 == Approx(1.2));
    CHECK(a.p95 == Approx(4.8));
    CHECK(a.std_error == Approx(std::sqrt(2.5 / 5.0)));

    const std::vector<double> with_nan{1.0, std::nan(""), 3.0};
    const Aggregate b = aggregate(with_nan);
    CHECK(b.n == 2);
    CHECK(b.mean == Approx(2.0));

    const std::vector<double> one{7.0};
    const Aggregate c = aggregate(one);
    CHECK(c.n == 1);
    CHECK(c.mean == 7.0);
    CHECK(c.p5 == 7.0);
    CHECK(c.std_error == 0.0);

    const Aggregate e = aggregate(std::span<const double>{});
    CHECK(e.n == 0);
    CHECK(std::isnan(e.mean));
}

TEST_CASE("results do not depend on the worker count")
{
    const MonteCarloResult a = monte_carlo(2000, 42, 1, 3, noisy_kernel);
    const MonteCarloResult b = monte_carlo(2000, 42, 8, 3, noisy_kernel);
    REQUIRE(a.samples.size() == 6000);
    REQUIRE(b.samples.size() == a.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i)
    {
        const double x = a.samples[i], y = b.samples[i];
        CHECK(((std::isnan(x) && std::isnan(y)) || x == y));
    }
    for (std::size_t c = 0; c < 3; ++c)
    {
        CHECK(a.aggregates[c].mean == b.aggregates[c].mean);
        CHECK(a.aggregates[c].p95 == b.aggregates[c].p95);
        CHECK(a.aggregates[c].n == b.aggregates[c].n);
    }
    CHECK(a.aggregates[0].mean == Approx(1.0).epsilon(0.2));
    CHECK(a.aggregates[2].n == 2000 - 286);
    const MonteCarloResult other = monte_carlo(2000, 43, 1, 3, noisy_kernel);
    CHECK(other.aggregates[0].mean != a.aggregates[0].mean);
}

TEST_CASE("single iteration and constant kernel")
{
    const MonteCarloResult one = monte_carlo(1, 9, 4, 3, noisy_kernel);
    CHECK(one.iterations == 1);
    CHECK(one.draw(0)[1] == 0.0);
    const MonteCarloResult flat = monte_carlo(500, 1, 2, 1, [](std::int64_t, std::mt19937_64 &, std::span<double> o) {
        o[0] = 2.5;
    });
    CHECK(flat.aggregates[0].mean == 2.5);
    CHECK(flat.aggregates[0].std_error == 0.0);
    CHECK(flat.aggregates[0].p5 == flat.aggregates[0].p95);
    CHECK(flat.column(0).size() == 500);
    CHECK_THROWS_AS(monte_carlo(0, 1, 1, 1, noisy_kernel), ArgumentError);
}

TEST_CASE("failed draws are counted by kind")
{
    const MonteCarloResult r = monte_carlo(100, 3, 4, 2, [](std::int64_t i, std::mt19937_64 &, std::span<double> o) {
        if (i % 10 == 0)
            throw InsufficientAnchorsError("no anchors", 0);
        if (i % 25 == 1)
            throw std::runtime_error("boom");
        o[0] = 1.0;
        o[1] = 2.0;
    });
    CHECK(r.failed_draws == 14);
    CHECK(r.failures_by_kind.at(ErrorKind::insufficient_anchors) == 10);
    CHECK(r.failures_by_kind.at(ErrorKind::unknown) == 4);
    CHECK(r.aggregates[0].n == 86);
    CHECK(std::isnan(r.draw(0)[0]));
}
