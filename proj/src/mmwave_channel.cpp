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

#include <cmath>

namespace leris
{
namespace
{

void check_index(const LerisPanel &panel, int m, int n)
{
    if (m < 1 || m > panel.m_rows || n < 1 || n > panel.n_cols)
        throw ArgumentError("element index outside the panel grid");
}

} // namespace

void LerisPanel::validate() const
{
    if (m_rows < 1 || n_cols < 1)
        throw ArgumentError("panel needs at least one element per side");
    if (!(element_side_m > 0.0))
        throw ArgumentError("element side must be positive");
    if (!(efficiency > 0.0 && efficiency <= 1.0))
        throw ArgumentError("panel efficiency must lie in (0, 1]");
    normalized(normal);
}

void MmWaveParams::validate() const
{
    if (!(wavelength_m > 0.0) || !(tx_power_w > 0.0) || !(tx_gain > 0.0) || !(noise_power > 0.0) ||
        !(path_loss_exponent > 0.0) || !(ref_distance_m > 0.0) || !(ue_directivity_rad > 0.0))
        throw ArgumentError("mmWave parameters must be positive");
    if (ue_directivity_rad > pi)
        throw ArgumentError("UE directivity angle must not exceed pi");
    for (double e : segment_exponents)
        if (!(e > 0.0))
            throw ArgumentError("path loss exponents must be positive");
}

PhaseProfile zero_profile(const LerisPanel &panel)
{
    PhaseProfile p;
    p.m_rows = panel.m_rows;
    p.n_cols = panel.n_cols;
    p.phase.assign(static_cast<std::size_t>(panel.elements()), 0.0);
    return p;
}

double geometric_phase(const LerisPanel &panel, int m, int n, double theta, double phi, const Vec3 &tx,
                       const Vec3 &rx)
{
    check_index(panel, m, n);
    const double st = std::sin(theta);
    const double cp = std::cos(phi), sp = std::sin(phi);
    const double d = panel.element_side_m;
    return d * st * ((m - 0.5) * cp + (n - 0.5) * sp) + (tx.x - rx.x) * st * cp + (tx.y - rx.y) * st * sp +
           (tx.z - rx.z) * std::cos(theta);
}

double path_delay_phase(const LerisPanel &panel, int m, int n, double theta, double phi, const PatternContext &ctx)
{
    check_index(panel, m, n);
    const double st = std::sin(theta);
    const double d = panel.element_side_m;
    const int second = ctx.variant == PathDelayVariant::literal ? m : n;
    const double dx = ctx.tx.x - d * (m - 0.5) * st * std::cos(phi) - ctx.rx.x;
    const double dy = ctx.tx.y - ctx.rx.y;
    const double dz = ctx.tx.z - d * (second - 0.5) * st * std::sin(phi) - ctx.rx.z;
    return ctx.wavenumber * std::sqrt(dx * dx + dy * dy + dz * dz);
}

PhaseProfile steering_phase_profile(const LerisPanel &panel, double target_theta, double target_phi,
                                    const PatternContext &ctx)
{
    if (!(target_theta >= 0.0 && target_theta <= pi) || !std::isfinite(target_phi))
        throw ArgumentError("steering angles out of range");
    PhaseProfile p = zero_profile(panel);
    const double st = std::sin(target_theta);
    const double uh = std::cos(target_phi) * st, vh = std::sin(target_phi) * st;
    const double kd = ctx.wavenumber * panel.element_side_m;
    for (int m = 1; m <= panel.m_rows; ++m)
        for (int n = 1; n <= panel.n_cols; ++n)
            p.at(m, n) = -kd * (m * uh + n * vh) - path_delay_phase(panel, m, n, target_theta, target_phi, ctx);
    p.steering = SteeringInfo{target_theta, target_phi};
    return p;
}

std::complex<double> array_factor(const LerisPanel &panel, const PhaseProfile &profile, double theta, double phi,
                                  const PatternContext &ctx)
{
    if (profile.m_rows != panel.m_rows || profile.n_cols != panel.n_cols ||
        profile.phase.size() != static_cast<std::size_t>(panel.elements()))
        throw ArgumentError("phase profile shape does not match the panel");
    std::complex<double> acc{0.0, 0.0};
    for (int m = 1; m <= panel.m_rows; ++m)
        for (int n = 1; n <= panel.n_cols; ++n)
        {
            const double arg = ctx.wavenumber * geometric_phase(panel, m, n, theta, phi, ctx.tx, ctx.rx) +
                               path_delay_phase(panel, m, n, theta, phi, ctx) + profile.at(m, n);
            acc += std::polar(1.0, arg);
        }
    return acc;
}

GainResult directional_gain(const LerisPanel &panel, const PhaseProfile &profile, double theta, double phi,
                            const PatternContext &ctx, const GridSpec &grid)
{
    if (!(grid.step_deg > 0.0))
        throw ArgumentError("quadrature step must be positive");
    const double span_deg = grid.domain == IntegrationDomain::hemisphere ? 90.0 : 180.0;
    const double cells = span_deg / grid.step_deg;
    if (std::abs(cells - std::round(cells)) > 1e-9 * cells)
        throw ArgumentError("quadrature step must divide the polar span");

    const double h = deg_to_rad(grid.step_deg);
    const GridSums sums = integrate_pattern_parallel(panel, profile, ctx, h, grid.domain);
    GainResult out;
    out.denominator = sums.fine;
    if (grid.check_convergence)
    {
        double other = sums.coarse;
        if (std::isnan(other))
            other = integrate_pattern_parallel(panel, profile, ctx, h / 2.0, grid.domain).fine;
        out.relative_change = std::abs(other - sums.fine) / std::abs(sums.fine);
        if (!(out.relative_change < grid.tolerance))
            throw QuadratureError("gain normalization integral did not converge; refine the grid",
                                  out.relative_change);
    }
    out.pattern_power = pattern_power(panel, profile, ctx, theta, phi);
    out.gain = panel.efficiency * 4.0 * pi * out.pattern_power / out.denominator;
    return out;
}

double max_gain(const LerisPanel &panel) { return panel.efficiency * panel.m_rows * panel.n_cols; }

double effective_aperture(const LerisPanel &panel, double wavelength_m)
{
    return static_cast<double>(panel.elements()) * wavelength_m * wavelength_m / (4.0 * pi);
}

double cascaded_gain(std::span<const LerisPanel> leading_panels, double wavelength_m)
{
    double g = 1.0;
    for (const auto &p : leading_panels)
        g *= effective_aperture(p, wavelength_m) * max_gain(p);
    return g;
}

double ue_antenna_gain(double theta_u, double theta_m)
{
    if (!(theta_m > 0.0 && theta_m <= pi))
        throw ArgumentError("UE directivity angle must lie in (0, pi]");
    return std::abs(theta_u) <= theta_m ? 2.0 * pi / theta_m : 0.0;
}

double total_route_gain(std::span<const LerisPanel> route, double final_gain, double theta_u,
                        const MmWaveParams &params)
{
    if (route.empty())
        throw ArgumentError("route must contain at least one panel");
    const double gr = ue_antenna_gain(theta_u, params.ue_directivity_rad);
    if (gr == 0.0)
        return 0.0;
    return cascaded_gain(route.first(route.size() - 1), params.wavelength_m) *
           effective_aperture(route.back(), params.wavelength_m) * final_gain * gr;
}

double reference_loss(const MmWaveParams &params)
{
    const double x = 4.0 * pi * params.ref_distance_m;
    return params.wavelength_m * params.wavelength_m / (x * x);
}

double path_loss(std::span<const double> segment_lengths, const MmWaveParams &params)
{
    if (segment_lengths.empty())
        throw ArgumentError("path loss needs at least one segment");
    if (!params.segment_exponents.empty() && params.segment_exponents.size() != segment_lengths.size())
        throw ArgumentError("per-segment exponents do not match the segment count");
    const double c0 = reference_loss(params);
    double lp = 1.0;
    for (std::size_t i = 0; i < segment_lengths.size(); ++i)
    {
        const double d = segment_lengths[i];
        if (!(d > 0.0))
            throw ArgumentError("segment lengths must be positive");
        const double n = params.segment_exponents.empty() ? params.path_loss_exponent : params.segment_exponents[i];
        lp *= c0 * std::pow(d / params.ref_distance_m, -n);
    }
    return lp;
}

double spectral_efficiency(double route_gain, double path_loss, const MmWaveParams &params, RateFormula formula)
{
    if (route_gain < 0.0 || path_loss < 0.0)
        throw ArgumentError("gains and losses must be non-negative");
    if (route_gain == 0.0)
        return 0.0;
    double snr = path_loss * params.tx_gain * params.tx_snr() * route_gain;
    if (formula == RateFormula::literal)
        snr /= params.noise_power;
    return std::log2(1.0 + snr);
}

} // namespace leris
