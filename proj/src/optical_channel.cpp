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

#include <algorithm>
#include <cmath>

namespace leris
{

VcselMode::VcselMode(double transmit_power_w, double beam_waist_m, double wavelength_m)
    : transmit_power_w_(transmit_power_w), beam_waist_m_(beam_waist_m), wavelength_m_(wavelength_m)
{
    if (!(transmit_power_w > 0.0) || !(beam_waist_m > 0.0) || !(wavelength_m > 0.0))
        throw ArgumentError("VCSEL mode requires positive power, waist and wavelength");
    rayleigh_range_m_ = pi * beam_waist_m * beam_waist_m / wavelength_m;
    divergence_rad_ = wavelength_m / (pi * beam_waist_m);
}

void Photodetector::validate() const
{
    if (!(area_m2 > 0.0))
        throw ArgumentError("photodetector area must be positive");
    if (!(fov_half_angle_rad > 0.0 && fov_half_angle_rad <= pi / 2.0))
        throw ArgumentError("photodetector FoV half-angle must lie in (0, pi/2]");
}

NoiseMode parse_noise_mode(const std::string &name)
{
    if (name == "off")
        return NoiseMode::off;
    if (name == "literal")
        return NoiseMode::literal;
    if (name == "fixed")
        return NoiseMode::fixed;
    if (name == "stochastic")
        return NoiseMode::stochastic;
    throw ConfigError("unknown noise mode '" + name + "' (expected off|literal|fixed|stochastic)");
}

std::string to_string(NoiseMode mode)
{
    switch (mode)
    {
    case NoiseMode::off: return "off";
    case NoiseMode::literal: return "literal";
    case NoiseMode::fixed: return "fixed";
    case NoiseMode::stochastic: return "stochastic";
    }
    return "fixed";
}

NoisePsd noise_psd(double p_los, const Photodetector &pd, const NoiseParams &noise)
{
    if (p_los < 0.0)
        throw ArgumentError("LoS power must be non-negative");
    const double photocurrent = pd.responsivity_a_per_w * p_los;
    NoisePsd out;
    out.thermal = noise.thermal_term();
    out.shot = photocurrent * 2.0 * noise.electron_charge;
    out.rin = photocurrent * noise.rin_per_hz * photocurrent;
    out.total = out.thermal + out.shot + out.rin;
    return out;
}

double noise_power(double p_los, const Photodetector &pd, const NoiseParams &noise, NoiseMode mode)
{
    switch (mode)
    {
    case NoiseMode::off:
        return 0.0;
    case NoiseMode::literal:
        return pd.bandwidth_hz * noise_psd(p_los, pd, noise).total;
    case NoiseMode::fixed:
    case NoiseMode::stochastic:
        if (!noise.fixed_variance)
            throw ConfigError("noise mode requires a configured fixed variance");
        return *noise.fixed_variance;
    }
    return 0.0;
}

double measured_power(double p_los, const Photodetector &pd, const NoiseParams &noise, NoiseMode mode,
                      std::optional<std::uint64_t> rng_seed)
{
    if (mode == NoiseMode::stochastic)
    {
        if (!rng_seed)
            throw ConfigError("stochastic noise requires an explicit RNG seed");
        std::mt19937_64 rng(*rng_seed);
        return measured_power(p_los, pd, noise, mode, rng);
    }
    if (p_los < 0.0)
        throw ArgumentError("LoS power must be non-negative");
    return p_los + noise_power(p_los, pd, noise, mode);
}

double measured_power(double p_los, const Photodetector &pd, const NoiseParams &noise, NoiseMode mode,
                      std::mt19937_64 &rng)
{
    if (p_los < 0.0)
        throw ArgumentError("LoS power must be non-negative");
    if (mode != NoiseMode::stochastic)
        return p_los + noise_power(p_los, pd, noise, mode);
    const double variance = noise_power(p_los, pd, noise, mode);
    if (variance <= 0.0)
        return p_los;
    std::normal_distribution<double> draw(0.0, std::sqrt(variance));
    return std::max(0.0, p_los + draw(rng));
}

} // namespace leris
