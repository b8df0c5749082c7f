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

// Reflecting-panel far field, directional gain and the cascaded link budget.
//
// Pattern functions work in the panel-local frame (origin at the panel
// centre, z along the normal, see Frame). Angles are polar theta from the
// normal and azimuth phi; elements are indexed 1..M along x and 1..N along y.

#pragma once

#include "leris/errors.hpp"
#include "leris/geometry.hpp"

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace leris
{

struct LerisPanel
{
    int id = 0;
    Vec3 center;
    Vec3 normal{1.0, 0.0, 0.0};
    int m_rows = 50;
    int n_cols = 50;
    double element_side_m = 0.005;
    double efficiency = 1.0;
    std::vector<int> vcsel_ids;

    void validate() const;
    Frame frame() const { return Frame(center, normal); }
    int elements() const { return m_rows * n_cols; }
};

struct MmWaveParams
{
    double wavelength_m = 0.01;
    double tx_power_w = 1.0;
    double tx_gain = 10.0;          // linear (10 dB)
    double noise_power = 1e-13;     // sigma^2, linear (-130 dB)
    double path_loss_exponent = 2.0;
    std::vector<double> segment_exponents; // optional per-segment override
    double ref_distance_m = 1.0;
    double ue_directivity_rad = pi / 3.0;

    double wavenumber() const { return 2.0 * pi / wavelength_m; }
    double tx_snr() const { return tx_power_w / noise_power; }
    void validate() const;
};

// The delay term couples element row m into both transverse offsets. The
// symmetric variant uses column n for the second offset instead.
enum class PathDelayVariant
{
    literal,
    symmetric
};

// Transmitter and receiver positions in the panel frame plus the wavenumber.
struct PatternContext
{
    double wavenumber = 2.0 * pi / 0.01;
    Vec3 tx;
    Vec3 rx;
    PathDelayVariant variant = PathDelayVariant::literal;
};

// Present when a profile was produced by steering_phase_profile; kernels use it
// to factor the double sum.
struct SteeringInfo
{
    double theta = 0.0;
    double phi = 0.0;
};

struct PhaseProfile
{
    int m_rows = 0;
    int n_cols = 0;
    std::vector<double> phase; // row-major, (m-1) * n_cols + (n-1)
    std::optional<SteeringInfo> steering;

    double at(int m, int n) const { return phase[static_cast<std::size_t>((m - 1) * n_cols + (n - 1))]; }
    double &at(int m, int n) { return phase[static_cast<std::size_t>((m - 1) * n_cols + (n - 1))]; }
};

PhaseProfile zero_profile(const LerisPanel &panel);

// zeta_mn in metres (the wavenumber is applied by the array factor).
double geometric_phase(const LerisPanel &panel, int m, int n, double theta, double phi, const Vec3 &tx,
                       const Vec3 &rx);

// omega_mn in radians. n is only consulted by the symmetric variant.
double path_delay_phase(const LerisPanel &panel, int m, int n, double theta, double phi, const PatternContext &ctx);

PhaseProfile steering_phase_profile(const LerisPanel &panel, double target_theta, double target_phi,
                                    const PatternContext &ctx);

std::complex<double> array_factor(const LerisPanel &panel, const PhaseProfile &profile, double theta, double phi,
                                  const PatternContext &ctx);

enum class IntegrationDomain
{
    hemisphere,
    full_sphere
};

struct GridSpec
{
    double step_deg = 0.25;
    IntegrationDomain domain = IntegrationDomain::hemisphere;
    bool check_convergence = true;
    double tolerance = 0.01; // allowed relative change when the step is halved
};

struct GainResult
{
    double gain = 0.0;
    double pattern_power = 0.0; // |F|^2 at the requested direction
    double denominator = 0.0;   // integral of |F|^2 over the domain
    double relative_change = 0.0;
};

// eta * 4 pi |F(theta, phi)|^2 / integral |F|^2 dOmega. Throws QuadratureError if
// the step-halving check moves the integral by more than the tolerance.
GainResult directional_gain(const LerisPanel &panel, const PhaseProfile &profile, double theta, double phi,
                            const PatternContext &ctx, const GridSpec &grid = {});

double max_gain(const LerisPanel &panel);
double effective_aperture(const LerisPanel &panel, double wavelength_m);
double cascaded_gain(std::span<const LerisPanel> leading_panels, double wavelength_m);

// 2 pi / theta_m inside the cone (boundary inclusive), else 0.
double ue_antenna_gain(double theta_u, double theta_m);

// G_cas A_eff G_L G_r for a route whose last panel steers toward the UE.
// final_gain is G_L at the true UE direction under the estimate-steered profile.
double total_route_gain(std::span<const LerisPanel> route, double final_gain, double theta_u,
                        const MmWaveParams &params);

double reference_loss(const MmWaveParams &params);
double path_loss(std::span<const double> segment_lengths, const MmWaveParams &params);

enum class RateFormula
{
    physical, // SNR = l_p G_t gamma_t G_r
    literal   // the same divided by sigma^2 once more
};

double spectral_efficiency(double route_gain, double path_loss, const MmWaveParams &params,
                           RateFormula formula = RateFormula::physical);

} // namespace leris
