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

// Pattern-power kernels behind the gain normalization integral.
//
//   reference   serial, direct O(MN) exponentials per grid point
//   parallel    OpenMP over polar rows; element sum factored by rows (the
//               literal delay term depends on m only) and, for steered
//               profiles, the column sum in closed form
//   normalizer  precomputed quadratic form giving the integral for any
//               steering direction in O(N M^2)
//
// The parallel kernel reduces per-row partial sums serially in row order, so
// its result does not depend on the thread count.

#pragma once

#include "leris/mmwave_channel.hpp"

#include <complex>
#include <vector>

namespace leris
{

// Trapezoid sums of |F|^2 sin(theta) on the uniform (theta, phi) grid. When
// the polar node count is even, `coarse` holds the same rule on the 2h subset
// of nodes; otherwise it is NaN.
struct GridSums
{
    double fine = 0.0;
    double coarse = 0.0;
};

GridSums integrate_pattern_reference(const LerisPanel &panel, const PhaseProfile &profile, const PatternContext &ctx,
                                     double step_rad, IntegrationDomain domain);

GridSums integrate_pattern_parallel(const LerisPanel &panel, const PhaseProfile &profile, const PatternContext &ctx,
                                    double step_rad, IntegrationDomain domain);

// |F(theta, phi)|^2 via the direct double sum.
double pattern_power_reference(const LerisPanel &panel, const PhaseProfile &profile, const PatternContext &ctx,
                               double theta, double phi);

// |F(theta, phi)|^2 via the factored sums (falls back to direct for the
// symmetric delay variant).
double pattern_power(const LerisPanel &panel, const PhaseProfile &profile, const PatternContext &ctx, double theta,
                     double phi);

// Normalization integral for steered profiles on one (panel, transmitter)
// pair. The hemisphere is parameterized by v = sin(theta) sin(phi) in [-1, 1]
// and the angle t in the x-z plane, where dOmega = dv dt, and both axes use a
// midpoint rule with `resolution` nodes.
class GainNormalizer
{
public:
    GainNormalizer(const LerisPanel &panel, const PatternContext &ctx, int resolution = 0,
                   IntegrationDomain domain = IntegrationDomain::hemisphere);

    // Integral of |F|^2 dOmega for the profile steered to (theta_hat, phi_hat).
    double denominator(double theta_hat, double phi_hat) const;

    // eta 4 pi |F(theta, phi)|^2 / denominator for the steered profile.
    double gain(double theta_hat, double phi_hat, double theta, double phi) const;

    int resolution() const { return resolution_; }
    static int default_resolution(const LerisPanel &panel);

private:
    std::vector<std::complex<double>> steering_weights(double theta_hat, double phi_hat) const;

    int m_ = 0;
    int n_ = 0;
    int resolution_ = 0;
    double kd_ = 0.0; // k0 D
    double efficiency_ = 1.0;
    double domain_factor_ = 1.0;
    PatternContext ctx_;
    double element_side_ = 0.0;
    // q_[(dn + n_ - 1) * m_ * m_ + a * m_ + b]
    std::vector<std::complex<double>> q_;
};

} // namespace leris
