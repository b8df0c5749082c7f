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

// Three-anchor optical localization: dual-mode ranging, sphere-intersection
// trilateration, orientation recovery and the per-link ranging error model.
//
// Internally everything runs in long double. Mode-ratio ranging at d >> z_R
// loses roughly log10(d^2 / z_R^2) ~ 9 digits, so a double pipeline cannot
// reach sub-micrometre round trips at room scale.

#pragma once

#include "leris/geometry.hpp"
#include "leris/optical_channel.hpp"

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace leris
{

struct OpticalMeasurement
{
    int vcsel_id = 0;
    ModeLabel mode = ModeLabel::a;
    long double received_power_w = 0.0L;
};

struct LocalizationEstimate
{
    Vec3 position;
    Vec3 orientation;     // unit norm
    Vec3 orientation_raw; // U^-1 c before normalization
    std::array<int, 3> anchor_ids{};
    std::array<double, 3> per_link_distances{};
    double condition_number = 0.0;
    double trilateration_residual_m = 0.0;
    std::size_t usable_anchors = 0;
};

// Closed-form range from the ratio of the two mode powers of one VCSEL.
// Throws InfeasibleRatioError when the normalized ratio admits no real,
// non-negative distance (including identical Rayleigh ranges).
long double mode_ratio_distance(long double p_a, long double p_b, const VcselMode &mode_a, const VcselMode &mode_b,
                                double pd_area);

// Range from a single mode power when the incidence cosine is known. With
// P_r = P_LoS (1 + 1/alpha) this reproduces estimated_distance_under_noise.
long double known_incidence_distance(long double p_r, const VcselMode &mode, double pd_area, long double cos_incidence);

struct TrilaterationResult
{
    Vec3 position;
    Vec3 mirror; // the other line-sphere root
    double residual_m = 0.0;
};

// Intersects the plane pair obtained by differencing the sphere equations with
// the first sphere and keeps the root inside the room.
TrilaterationResult trilaterate(const std::array<Vec3, 3> &anchors, const std::array<long double, 3> &distances,
                                const Room &room);

struct OrientationSolution
{
    Vec3 raw;
    Vec3 normalized;
    double determinant = 0.0;
    double condition_number = 0.0;
};

// Solves U n = c for the receiver normal; rows of U are anchor unit directions.
OrientationSolution orientation_solve(const std::array<Vec3, 3> &unit_dirs, const std::array<long double, 3> &c);

inline constexpr double orientation_det_tolerance = 1e-9;

struct AnchorCandidate
{
    int id = 0;
    Vec3 position;
    double snr = 0.0;
    int panel_id = 0;
};

// Triplet maximizing the smallest singular value of the stacked unit-direction
// matrix seen from ue_hint, restricted to triplets whose mirror root falls
// outside the room. Without a hint, a coarse position is trilaterated from the
// widest single-panel triangle using coarse_ranges (same order as candidates).
// Ties go to the lexicographically smallest id triple.
std::array<int, 3> select_anchor_triplet(std::span<const AnchorCandidate> candidates, std::optional<Vec3> ue_hint,
                                         const Room &room,
                                         std::span<const long double> coarse_ranges = {});

// One anchor with its estimated range and the mode-a power used for the
// orientation equations.
struct RangedAnchor
{
    int vcsel_id = 0;
    int panel_id = 0;
    Vec3 position;
    const VcselMode *mode_a = nullptr;
    long double distance = 0.0L;
    long double power_a = 0.0L;
};

// Triplet selection, trilateration and orientation solve over pre-ranged anchors.
LocalizationEstimate solve_pose(std::span<const RangedAnchor> anchors, double pd_area, const Room &room,
                                std::optional<Vec3> ue_hint = std::nullopt);

struct LocalizeOptions
{
    long double power_floor_w = 0.0L; // both modes must exceed this
};

// Full dual-mode pipeline: pairs mode a/b measurements per VCSEL, ranges each
// anchor from the power ratio, then solves position and orientation.
LocalizationEstimate localize(std::span<const OpticalMeasurement> measurements, std::span<const Vcsel> registry,
                              const Photodetector &pd, const Room &room, const LocalizeOptions &options = {});

// ---- Ranging error under noise --------------------------------------------

// d [1 - sqrt((alpha - z^2/d^2) / (1 + alpha))], evaluated without cancellation.
// Throws NoiseDominatedError when alpha <= z^2/d^2. alpha = inf gives 0.
double ranging_error(double d, double z_r, double alpha);

// sqrt((alpha d^2 - z^2) / (alpha + 1)); never exceeds d.
double estimated_distance_under_noise(double d, double z_r, double alpha);

} // namespace leris
