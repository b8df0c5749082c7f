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


#include "leris/mmwave_channel.hpp"
#include "leris/pattern_kernels.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace leris;
using doctest::Approx;

namespace
{

LerisPanel square_panel(int side, double d = 0.005, double eta = 1.0)
{
    LerisPanel p;
    p.m_rows = p.n_cols = side;
    p.element_side_m = d;
    p.efficiency = eta;
    return p;
}

PatternContext context(Vec3 tx = {0.3, -0.2, 1.1})
{
    PatternContext c;
    c.wavenumber = 2.0 * pi / 0.01;
    c.tx = tx;
    c.rx = {0, 0, 0};
    return c;
}

// integral of G sin(theta) over the hemisphere on a fine reference grid
double gain_integral(const LerisPanel &panel, const PhaseProfile &prof, const PatternContext &ctx, double step_deg)
{
    GridSpec g;
    g.step_deg = step_deg;
    g.check_convergence = false;
    const double den = directional_gain(panel, prof, 0.0, 0.0, ctx, g).denominator;
    const double h = deg_to_rad(step_deg);
    const GridSums s = integrate_pattern_reference(panel, prof, ctx, h, IntegrationDomain::hemisphere);
    return panel.efficiency * 4.0 * pi * s.fine / den;
}

} // namespace

TEST_CASE("geometric phase")
{
    const LerisPanel p = square_panel(4);
    const Vec3 tx{0.3, -0.2, 1.1}, rx{0.1, 0.4, 2.0};
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 4; ++n)
            CHECK(geometric_phase(p, m, n, 0.0, 0.7, tx, rx) == Approx(tx.z - rx.z).epsilon(1e-15));
    const LerisPanel one = square_panel(1);
    CHECK(geometric_phase(one, 1, 1, pi / 2, 0.0, {}, {}) == Approx(0.0025).epsilon(1e-14));
    CHECK(geometric_phase(p, 2, 3, 0.4, 1.1, tx, rx) ==
          Approx(geometric_phase(p, 2, 3, 0.4, 1.1 + 2 * pi, tx, rx)).epsilon(1e-12));
    CHECK_THROWS_AS(geometric_phase(p, 0, 1, 0.1, 0.1, tx, rx), ArgumentError);
    CHECK_THROWS_AS(geometric_phase(p, 1, 5, 0.1, 0.1, tx, rx), ArgumentError);
}

TEST_CASE("path delay phase")
{
    const LerisPanel p = square_panel(3);
    PatternContext c = context({0.5, 0.5, 0.5});
    c.rx = c.tx;
    CHECK(path_delay_phase(p, 2, 2, 0.0, 0.0, c) == 0.0);

    LerisPanel tiny = square_panel(1, 1e-12);
    PatternContext unit = context({0, 0, 0});
    unit.rx = {1, 0, 0};
    CHECK(path_delay_phase(tiny, 1, 1, 0.6, 0.3, unit) == Approx(unit.wavenumber).epsilon(1e-9));

    // the variants agree on the diagonal and differ off it
    PatternContext lit = context(), sym = context();
    sym.variant = PathDelayVariant::symmetric;
    CHECK(path_delay_phase(p, 2, 2, 0.5, 0.8, lit) == path_delay_phase(p, 2, 2, 0.5, 0.8, sym));
    CHECK(path_delay_phase(p, 1, 3, 0.5, 0.8, lit) != path_delay_phase(p, 1, 3, 0.5, 0.8, sym));
    const LerisPanel single = square_panel(1);
    CHECK(path_delay_phase(single, 1, 1, 0.5, 0.8, lit) == path_delay_phase(single, 1, 1, 0.5, 0.8, sym));
}

TEST_CASE("steering profile")
{
    const LerisPanel p = square_panel(5);
    const PatternContext c = context();
    const PhaseProfile broadside = steering_phase_profile(p, 0.0, 0.4, c);
    for (int m = 1; m <= 5; ++m)
        for (int n = 1; n <= 5; ++n)
            CHECK(broadside.at(m, n) == Approx(-path_delay_phase(p, m, n, 0.0, 0.4, c)).epsilon(1e-14));
    REQUIRE(broadside.steering.has_value());
}

TEST_CASE("2 x 2 hand oracle")
{
    const LerisPanel p = square_panel(2);
    const PatternContext c = context();
    const PhaseProfile prof = steering_phase_profile(p, pi / 4, 0.0, c);
    CHECK(prof.at(1, 1) == Approx(-729.26566140825278).epsilon(1e-13));
    CHECK(prof.at(1, 2) == Approx(-729.26566140825278).epsilon(1e-13));
    CHECK(prof.at(2, 1) == Approx(-730.91773016096886).epsilon(1e-13));
    CHECK(prof.at(2, 2) == Approx(-730.91773016096886).epsilon(1e-13));
    const auto f1 = array_factor(p, prof, pi / 4, 0.0, c);
    CHECK(f1.real() == Approx(1.6614509264346438).epsilon(1e-9));
    CHECK(f1.imag() == Approx(-3.6386234786041636).epsilon(1e-9));
    CHECK(std::abs(f1) == Approx(4.0).epsilon(1e-12));
    const auto f2 = array_factor(p, prof, 0.3, 1.2, c);
    CHECK(f2.real() == Approx(-1.2877120458001728).epsilon(1e-9));
    CHECK(f2.imag() == Approx(0.96058587226604894).epsilon(1e-9));
}

TEST_CASE("array factor maximality")
{
    const PatternContext c = context();
    const LerisPanel one = square_panel(1);
    CHECK(std::abs(array_factor(one, zero_profile(one), 0.3, 0.2, c)) == Approx(1.0).epsilon(1e-15));
    for (int side : {2, 8, 50})
    {
        const LerisPanel p = square_panel(side);
        const PhaseProfile prof = steering_phase_profile(p, 0.6, 2.1, c);
        CHECK(std::abs(array_factor(p, prof, 0.6, 2.1, c)) == Approx(side * side).epsilon(1e-9));
    }
    PhaseProfile wrong = zero_profile(square_panel(3));
    CHECK_THROWS_AS(array_factor(square_panel(4), wrong, 0.1, 0.1, c), ArgumentError);
}

TEST_CASE("directional gain")
{
    const PatternContext c = context();
    SUBCASE("single element is 2 eta over the hemisphere")
    {
        for (double eta : {1.0, 0.6})
        {
            const LerisPanel one = square_panel(1, 0.005, eta);
            const auto g = directional_gain(one, zero_profile(one), 0.4, 1.0, c);
            CHECK(g.gain == Approx(2.0 * eta).epsilon(1e-4));
        }
    }
    SUBCASE("normalization identity")
    {
        const LerisPanel p = square_panel(6, 0.005, 0.8);
        const PhaseProfile prof = steering_phase_profile(p, 0.5, 0.9, c);
        CHECK(gain_integral(p, prof, c, 0.5) == Approx(4 * pi * 0.8).epsilon(1e-10));
    }
    SUBCASE("broadside gain near M N")
    {
        const LerisPanel p = square_panel(16);
        const PhaseProfile prof = steering_phase_profile(p, 0.0, 0.0, c);
        GridSpec g;
        g.step_deg = 0.5;
        const double gain = directional_gain(p, prof, 0.0, 0.0, c, g).gain;
        CHECK(gain > 256.0 / 4.0);
        CHECK(gain < 256.0 * 4.0);
    }
    SUBCASE("grid checks")
    {
        const LerisPanel p = square_panel(2);
        GridSpec g;
        g.step_deg = 0.7;
        CHECK_THROWS_AS(directional_gain(p, zero_profile(p), 0.1, 0.1, c, g), ArgumentError);
        // a coarse grid cannot resolve a large array
        const LerisPanel big = square_panel(40);
        g.step_deg = 10.0;
        g.tolerance = 1e-6;
        CHECK_THROWS_AS(directional_gain(big, steering_phase_profile(big, 0.3, 0.3, c), 0.3, 0.3, c, g),
                        QuadratureError);
    }
}

TEST_CASE("closed-form channel constants")
{
    const LerisPanel p = square_panel(50);
    CHECK(max_gain(p) == Approx(2500.0).epsilon(1e-15));
    CHECK(max_gain(square_panel(10, 0.005, 0.5)) == Approx(50.0));
    CHECK(max_gain(square_panel(1)) == 1.0);
    CHECK(effective_aperture(p, 0.01) == Approx(0.019894367886486917).epsilon(1e-12));
    CHECK(effective_aperture(square_panel(1), 2.0 * std::sqrt(pi)) == Approx(1.0).epsilon(1e-14));
    CHECK(effective_aperture(p, 0.02) == Approx(4.0 * effective_aperture(p, 0.01)).epsilon(1e-15));

    const std::vector<LerisPanel> none, two(1, p), four(3, p);
    CHECK(cascaded_gain(none, 0.01) == 1.0);
    CHECK(cascaded_gain(two, 0.01) == Approx(49.735919716217292).epsilon(1e-12));
    CHECK(cascaded_gain(four, 0.01) == Approx(123029.84021453663).epsilon(1e-12));
}

TEST_CASE("UE antenna gain")
{
    CHECK(ue_antenna_gain(pi / 6, pi / 3) == Approx(6.0).epsilon(1e-15));
    CHECK(ue_antenna_gain(pi / 3, pi / 3) == Approx(6.0).epsilon(1e-15));
    CHECK(ue_antenna_gain(std::nextafter(pi / 3, 4.0), pi / 3) == 0.0);
    CHECK_THROWS_AS(ue_antenna_gain(0.1, 0.0), ArgumentError);
}

TEST_CASE("total route gain")
{
    const MmWaveParams params;
    const LerisPanel one = square_panel(1);
    const std::vector<LerisPanel> route{one};
    CHECK(total_route_gain(route, 2.0, 0.2, params) ==
          Approx(effective_aperture(one, 0.01) * 2.0 * 6.0).epsilon(1e-15));
    CHECK(total_route_gain(route, 2.0, 1.2, params) == 0.0);

    // perfect steering maximises the final-panel gain
    const LerisPanel p = square_panel(8);
    const PatternContext c = context();
    const PhaseProfile good = steering_phase_profile(p, 0.5, 1.0, c);
    const PhaseProfile off = steering_phase_profile(p, 0.55, 1.05, c);
    GridSpec g;
    g.step_deg = 0.5;
    CHECK(directional_gain(p, good, 0.5, 1.0, c, g).gain > directional_gain(p, off, 0.5, 1.0, c, g).gain);
}

TEST_CASE("path loss")
{
    const MmWaveParams params;
    CHECK(reference_loss(params) == Approx(6.3325739776461107e-7).epsilon(1e-12));
    const std::vector<double> one{1.0}, two{5.0, 3.0}, bad{2.0, 0.0};
    CHECK(path_loss(one, params) == Approx(6.3325739776461107e-7).epsilon(1e-12));
    CHECK(path_loss(two, params) == Approx(1.7822885858826971e-15).epsilon(1e-12));
    CHECK_THROWS_AS(path_loss(bad, params), ArgumentError);
    MmWaveParams per = params;
    per.segment_exponents = {2.0, 3.0};
    CHECK(path_loss(two, per) == Approx(6.3325739776461107e-7 * 6.3325739776461107e-7 / 25.0 / 27.0).epsilon(1e-12));
}

TEST_CASE("spectral efficiency")
{
    const MmWaveParams params; // G_t gamma_t = 1e14
    CHECK(spectral_efficiency(0.0, 1.0, params) == 0.0);
    CHECK(spectral_efficiency(1e-14, 1.0, params) == Approx(1.0).epsilon(1e-12));
    CHECK(spectral_efficiency(1023e-14, 1.0, params) == Approx(10.0).epsilon(1e-12));
    // the literal form divides by sigma^2 once more
    CHECK(spectral_efficiency(1e-27, 1.0, params, RateFormula::literal) == Approx(1.0).epsilon(1e-12));
}
