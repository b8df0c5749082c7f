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

// Gaussian-beam VCSEL channel: spot size, intensity profiles, received
// line-of-sight power at a photodetector and the receiver noise model.
//
// The beam routines are templates over the floating-point type so the
// localization chain can evaluate them in extended precision; the ranging
// inversion needs relative power accuracy well below 1e-9 at room scale.

#pragma once

#include "leris/errors.hpp"
#include "leris/geometry.hpp"

#include <concepts>
#include <cstdint>
#include <optional>
#include <random>
#include <string>

namespace leris
{

// One transverse lasing mode. Rayleigh range and divergence are derived from
// (waist, wavelength) and are never configured independently.
class VcselMode
{
public:
    VcselMode(double transmit_power_w, double beam_waist_m, double wavelength_m);

    double transmit_power_w() const { return transmit_power_w_; }
    double beam_waist_m() const { return beam_waist_m_; }
    double wavelength_m() const { return wavelength_m_; }
    double rayleigh_range_m() const { return rayleigh_range_m_; }
    double divergence_rad() const { return divergence_rad_; }

private:
    double transmit_power_w_;
    double beam_waist_m_;
    double wavelength_m_;
    double rayleigh_range_m_;
    double divergence_rad_;
};

enum class ModeLabel
{
    a,
    b
};

struct AzimuthSector
{
    double lo = 0.0; // radians, relative to the panel normal
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool contains(double azimuth, bool inclusive_hi) const
    {
        return azimuth >= lo && (inclusive_hi ? azimuth <= hi : azimuth < hi);
    }
};

struct Vcsel
{
    int id = 0;
    int panel_id = 0;
    Vec3 position;
    Vec3 boresight;
    AzimuthSector azimuth_sector;
    double elevation_rad = 0.0;
    VcselMode mode_a;
    VcselMode mode_b;

    const VcselMode &mode(ModeLabel label) const { return label == ModeLabel::a ? mode_a : mode_b; }
};

struct Photodetector
{
    double area_m2 = 1e-4;
    double fov_half_angle_rad = pi / 2.0;
    double responsivity_a_per_w = 0.7;
    double bandwidth_hz = 1e9;

    void validate() const;
};

// Receiver noise constants, all linear.
struct NoiseParams
{
    double boltzmann = 1.380649e-23;
    double temperature_k = 300.0;
    double noise_figure = 3.1622776601683795; // 5 dB
    double load_ohms = 50.0;
    double electron_charge = 1.602176634e-19;
    double rin_per_hz = 3.1622776601683794e-16; // -155 dB/Hz
    std::optional<double> fixed_variance = 2.5e-12;

    double thermal_term() const { return 4.0 * boltzmann * temperature_k * noise_figure / load_ohms; }
};

// The additive noise term mixes photocurrent-variance units with optical
// watts; the three explicit modes keep that choice visible to the caller.
enum class NoiseMode
{
    off,          // P_r = P_LoS
    literal,      // P_r = P_LoS + B_o * S(P_LoS)
    fixed,        // P_r = P_LoS + P_n (configured variance used as a bias)
    stochastic,   // P_r = max(0, P_LoS + N(0, P_n))
};

NoiseMode parse_noise_mode(const std::string &name);
std::string to_string(NoiseMode mode);

struct NoisePsd
{
    double thermal = 0.0;
    double shot = 0.0;
    double rin = 0.0;
    double total = 0.0;
};

// ---- Beam propagation ------------------------------------------------------

template <std::floating_point T>
T spot_size(const VcselMode &mode, T axial_distance)
{
    if (axial_distance < T(0))
        throw ArgumentError("axial distance must be non-negative");
    const T ratio = axial_distance / T(mode.rayleigh_range_m());
    return T(mode.beam_waist_m()) * std::sqrt(T(1) + ratio * ratio);
}

template <std::floating_point T>
T gaussian_intensity(const VcselMode &mode, T radial_offset, T axial_distance)
{
    const T w = spot_size(mode, axial_distance);
    const T w2 = w * w;
    return T(2) * T(mode.transmit_power_w()) / (T(pi) * w2) *
           std::exp(T(-2) * radial_offset * radial_offset / w2);
}

// Intensity at range d and irradiance angle phi off the beam axis.
template <std::floating_point T>
T angular_intensity(const VcselMode &mode, T distance, T irradiance_angle)
{
    if (distance < T(0))
        throw ArgumentError("distance must be non-negative");
    if (!(std::abs(irradiance_angle) < T(pi) / T(2)))
        throw ArgumentError("irradiance angle places the receiver behind the emitter");
    return gaussian_intensity(mode, distance * std::sin(irradiance_angle), distance * std::cos(irradiance_angle));
}

// Intensity-to-power coefficient A_PD * I(d, 0); the received power is this
// times cos(psi).
template <std::floating_point T>
T mode_coefficient(const VcselMode &mode, T pd_area, T distance)
{
    const T w = spot_size(mode, distance);
    return T(2) * pd_area * T(mode.transmit_power_w()) / (T(pi) * w * w);
}

template <std::floating_point T>
T received_los_power(const VcselMode &mode, T distance, T irradiance_angle, const Photodetector &pd,
                     T incidence_angle)
{
    if (!(distance > T(0)))
        throw ArgumentError("distance must be positive");
    if (std::abs(incidence_angle) > T(pd.fov_half_angle_rad))
        return T(0);
    const T c = std::cos(incidence_angle);
    if (!(c > T(0)))
        return T(0);
    return angular_intensity(mode, distance, irradiance_angle) * T(pd.area_m2) * c;
}

// ---- Noise -----------------------------------------------------------------

NoisePsd noise_psd(double p_los, const Photodetector &pd, const NoiseParams &noise);

// Noise power P_n that a given mode adds (literal: B_o * S; fixed/stochastic:
// the configured variance; off: 0).
double noise_power(double p_los, const Photodetector &pd, const NoiseParams &noise, NoiseMode mode);

// Measured power with one noise realisation. Stochastic mode requires a seed.
double measured_power(double p_los, const Photodetector &pd, const NoiseParams &noise, NoiseMode mode,
                      std::optional<std::uint64_t> rng_seed = std::nullopt);

// Same as above with a caller-owned generator (Monte Carlo substreams).
double measured_power(double p_los, const Photodetector &pd, const NoiseParams &noise, NoiseMode mode,
                      std::mt19937_64 &rng);

} // namespace leris
