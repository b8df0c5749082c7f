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


#include "leris/optical_channel.hpp"

#include "doctest.h"

#include <cmath>

using namespace leris;
using doctest::Approx;

namespace
{

const VcselMode table_mode(0.01, 5.6e-6, 950e-9);

} // namespace

TEST_CASE("derived mode constants")
{
    CHECK(table_mode.rayleigh_range_m() == Approx(1.0370562696481675e-4).epsilon(1e-12));
    CHECK(table_mode.divergence_rad() == Approx(950e-9 / (pi * 5.6e-6)).epsilon(1e-12));
    CHECK(table_mode.divergence_rad() == Approx(0.0540).epsilon(1e-3));
    CHECK_THROWS_AS(VcselMode(0.0, 5.6e-6, 950e-9), ArgumentError);
    CHECK_THROWS_AS(VcselMode(0.01, -1.0, 950e-9), ArgumentError);
}

TEST_CASE("spot size")
{
    CHECK(spot_size(table_mode, 0.0) == Approx(5.6e-6).epsilon(1e-15));
    CHECK(spot_size(table_mode, 5.0) == Approx(0.26999499280325474).epsilon(1e-12));
    CHECK(spot_size(table_mode, table_mode.rayleigh_range_m()) == Approx(5.6e-6 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(spot_size(table_mode, -1.0), ArgumentError);
}

TEST_CASE("gaussian intensity")
{
    const double on_axis = gaussian_intensity(table_mode, 0.0, 5.0);
    CHECK(on_axis == Approx(0.087331054248592157).epsilon(1e-12));
    const double w = spot_size(table_mode, 5.0);
    CHECK(gaussian_intensity(table_mode, w, 5.0) == Approx(on_axis * std::exp(-2.0)).epsilon(1e-12));
    CHECK(gaussian_intensity(table_mode, 1e3, 5.0) == 0.0);
}

TEST_CASE("angular intensity")
{
    CHECK(angular_intensity(table_mode, 5.0, 0.0) == Approx(gaussian_intensity(table_mode, 0.0, 5.0)).epsilon(1e-15));
    const double th = table_mode.divergence_rad();
    CHECK(angular_intensity(table_mode, 5.0, th) ==
          Approx(gaussian_intensity(table_mode, 0.0, 5.0) * std::exp(-2.0)).epsilon(1e-3));
    const double w0 = 5.6e-6;
    CHECK(angular_intensity(table_mode, 0.0, 0.7) == Approx(2 * 0.01 / (pi * w0 * w0)).epsilon(1e-12));
    CHECK_THROWS_AS(angular_intensity(table_mode, 1.0, pi / 2), ArgumentError);
}

TEST_CASE("received LoS power")
{
    Photodetector pd;
    CHECK(received_los_power(table_mode, 5.0, 0.0, pd, 0.0) == Approx(8.7331054248592157e-6).epsilon(1e-12));
    CHECK(received_los_power(table_mode, 5.0, 0.0, pd, pi / 3) == Approx(4.3665527124296078e-6).epsilon(1e-12));
    pd.fov_half_angle_rad = deg_to_rad(60.0);
    CHECK(received_los_power(table_mode, 5.0, 0.0, pd, deg_to_rad(60.0) + 0.01) == 0.0);
    CHECK(mode_coefficient<double>(table_mode, 1e-4, 5.0) * 0.5 ==
          Approx(received_los_power(table_mode, 5.0, 0.0, pd, pi / 3)).epsilon(1e-14));
    // extended precision agrees with double
    CHECK(double(mode_coefficient<long double>(table_mode, 1e-4L, 3.0L)) ==
          Approx(mode_coefficient<double>(table_mode, 1e-4, 3.0)).epsilon(1e-14));
}

TEST_CASE("noise PSD terms")
{
    const Photodetector pd;
    const NoiseParams np;
    const auto dark = noise_psd(0.0, pd, np);
    CHECK(dark.thermal == Approx(1.0478389174161151e-21).epsilon(1e-9));
    CHECK(dark.thermal == Approx(1.0477e-21).epsilon(2e-4));
    CHECK(dark.shot == 0.0);
    CHECK(dark.rin == 0.0);

    const double p = 8.7331054248592157e-6;
    const auto s = noise_psd(p, pd, np);
    CHECK(s.shot == Approx(1.9588768435555309e-24).epsilon(1e-9));
    CHECK(s.rin == Approx(1.1817714284850565e-26).epsilon(1e-9));
    CHECK(s.total == Approx(s.thermal + s.shot + s.rin).epsilon(1e-15));

    NoiseParams quiet = np;
    quiet.rin_per_hz = 0.0;
    quiet.electron_charge = 0.0;
    CHECK(noise_psd(1e-3, pd, quiet).total == Approx(quiet.thermal_term()).epsilon(1e-15));
}

TEST_CASE("measured power under each noise mode")
{
    const Photodetector pd;
    const NoiseParams np;
    const double p = 8.7331054248592157e-6;
    CHECK(measured_power(p, pd, np, NoiseMode::off) == p);
    CHECK(measured_power(p, pd, np, NoiseMode::fixed) == Approx(p + 2.5e-12).epsilon(1e-15));
    CHECK(measured_power(p, pd, np, NoiseMode::literal) == Approx(p + 1.0498096119739554e-12).epsilon(1e-12));
    CHECK_THROWS_AS(measured_power(p, pd, np, NoiseMode::stochastic), ConfigError);
    const double a = measured_power(p, pd, np, NoiseMode::stochastic, 42);
    const double b = measured_power(p, pd, np, NoiseMode::stochastic, 42);
    CHECK(a == b);
    CHECK(std::abs(a - p) < 10 * std::sqrt(2.5e-12));
    CHECK(measured_power(0.0, pd, np, NoiseMode::stochastic, 1) >= 0.0);
}

TEST_CASE("noise mode names round-trip")
{
    for (const auto m : {NoiseMode::off, NoiseMode::literal, NoiseMode::fixed, NoiseMode::stochastic})
        CHECK(parse_noise_mode(to_string(m)) == m);
    CHECK_THROWS_AS(parse_noise_mode("loud"), ConfigError);
}
