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


#include "leris/experiments.hpp"

#include "doctest.h"

#include <cmath>

using namespace leris;
using doctest::Approx;

namespace
{

ScenarioConfig small_config()
{
    ScenarioConfig c;
    c.array.m_rows = c.array.n_cols = 8;
    c.experiment.snr_db = {100.0, 130.0};
    c.experiment.n_elements = {16, 64};
    c.experiment.seed = 11;
    return c;
}

const SweepRow &row_at(const SweepResult &r, double axis, int L)
{
    for (const auto &row : r.rows)
        if (row.axis == axis && row.panels == L)
            return row;
    FAIL("missing row");
    return r.rows.front();
}

} // namespace

TEST_CASE("pose sampling stays inside the sampling box")
{
    const Scenario sc = build_scenario(ScenarioConfig{});
    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i)
    {
        const UePose p = sample_pose(sc, rng);
        CHECK(p.position.x >= 0.0);
        CHECK(p.position.x <= 10.0);
        CHECK(p.position.y >= 0.0);
        CHECK(p.position.y <= 10.0);
        CHECK(p.position.z == 1.5);
        CHECK(norm(p.normal) == Approx(1.0));
        CHECK(p.azimuth_rad >= 0.0);
        CHECK(p.azimuth_rad < 2 * pi);
    }
    std::mt19937_64 a(5), b(5);
    CHECK(sample_pose(sc, a).position == sample_pose(sc, b).position);
}

TEST_CASE("observation and noise-free localization")
{
    ScenarioConfig c;
    c.optical.noise_mode = "off";
    const Scenario sc = build_scenario(c);
    UePose pose{{4, 6, 1.5}, ue_normal(pi, 0.0), pi};
    const std::vector<int> all{1, 2, 3, 4};
    const auto obs = observe(sc, all, pose, nullptr);
    REQUIRE(obs.size() >= 3);
    for (const auto &o : obs)
    {
        CHECK(o.vcsel->panel_id == 1);
        CHECK(o.measured_a == o.los_a);
        CHECK(o.cos_incidence > 0.0L);
    }
    const LocalizationOutcome out = localize_pose(sc, all, pose, nullptr);
    REQUIRE(out.estimate.has_value());
    CHECK(distance(out.estimate->position, pose.position) < 1e-9);

    // panel 2 alone cannot see a UE facing panel 1
    const std::vector<int> only2{2};
    const LocalizationOutcome none = localize_pose(sc, only2, pose, nullptr);
    CHECK_FALSE(none.estimate.has_value());
    REQUIRE(none.failure.has_value());
    CHECK(*none.failure == ErrorKind::insufficient_anchors);
}

TEST_CASE("fixed noise perturbs the powers")
{
    const Scenario sc = build_scenario(ScenarioConfig{});
    UePose pose{{4, 6, 1.5}, ue_normal(pi, 0.0), pi};
    const std::vector<int> all{1, 2, 3, 4};
    std::mt19937_64 rng(1);
    const auto obs = observe(sc, all, pose, &rng);
    REQUIRE_FALSE(obs.empty());
    bool differs = false;
    for (const auto &o : obs)
        differs = differs || o.measured_a != o.los_a;
    CHECK(differs);
    const auto loc = localize_pose(sc, all, pose, &rng);
    REQUIRE(loc.estimate.has_value());
    CHECK(distance(loc.estimate->position, pose.position) < 1e-3);
}

TEST_CASE("fig2 sweep")
{
    ScenarioConfig c;
    c.optical.noise_mode = "off";
    c.experiment.panel_sets = {{1, {2}}, {4, {1, 2, 3, 4}}};
    const SweepResult off = run_error_vs_azimuth(build_scenario(c));
    CHECK(off.rows.size() == 720);
    for (const auto &row : off.rows)
        if (row.panels == 4)
        {
            CHECK(row.value.n == 1);
            CHECK(row.value.mean == 0.0);
        }
    // azimuth 180 puts the UE next to panel 1, outside panel 2's footprint
    CHECK(std::isnan(row_at(off, 180.0, 1).value.mean));
    CHECK(row_at(off, 180.0, 1).value.n == 0);
    CHECK(off.counters.at("L1.not_covered") > 0);
    CHECK(off.counters.count("L4.not_covered") == 0);

    const SweepResult fixed = run_error_vs_azimuth(build_scenario(ScenarioConfig{}));
    double worst = 0.0;
    for (const auto &row : fixed.rows)
        if (row.panels == 4)
        {
            REQUIRE(row.value.n == 1);
            CHECK(row.value.mean > 0.0);
            worst = std::max(worst, row.value.mean);
        }
    CHECK(worst <= 2.0);
}

TEST_CASE("fig3 sweep on a small array")
{
    const Scenario sc = build_scenario(small_config());
    const SweepResult r = run_rate_vs_snr(sc, RunOptions{60, 2});
    CHECK(r.figure == "fig3");
    CHECK(r.rows.size() == 6);
    for (const auto &row : r.rows)
    {
        CHECK(row.value.n == 60);
        CHECK(row.value.mean >= 0.0);
        CHECK(row.value.mean <= 16.0);
    }
    for (int L : {1, 2, 4})
        CHECK(row_at(r, 130.0, L).value.mean > row_at(r, 100.0, L).value.mean);
    CHECK(r.counters.at("draws") == 60);

    const SweepResult again = run_rate_vs_snr(sc, RunOptions{60, 1});
    CHECK(to_csv(again) == to_csv(r));
    const std::string csv = to_csv(r);
    CHECK(csv.rfind("snr_db,L,mean_R,p5,p50,p95,n,seed\n", 0) == 0);
    const json s = sweep_summary(r);
    CHECK(s.contains("counters"));
}

TEST_CASE("fig4 sweep on small arrays")
{
    const Scenario sc = build_scenario(small_config());
    const SweepResult r = run_rate_vs_elements(sc, RunOptions{40, 2});
    CHECK(r.figure == "fig4");
    CHECK(r.rows.size() == 6);
    for (int L : {1, 2, 4})
    {
        CHECK(row_at(r, 64.0, L).value.mean >= row_at(r, 16.0, L).value.mean);
        CHECK(row_at(r, 64.0, L).value.n == 40);
    }
}

TEST_CASE("localization round trip statistics")
{
    const Scenario sc = build_scenario(ScenarioConfig{});
    const RoundTripStats st = run_localization_round_trip(sc, 200, 7, 2);
    CHECK(st.draws == 200);
    CHECK(st.exact + st.flagged + st.silently_wrong == st.draws);
    CHECK(st.silently_wrong == 0);
    CHECK(st.max_position_error_m < 1e-6);
}

TEST_CASE("number formatting")
{
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(INFINITY) == "inf");
    CHECK(format_number(1.0 / 3.0) == "0.3333333333");
}
