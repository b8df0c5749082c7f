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

// Per-draw simulation pipeline (observe -> localize -> route) and the three
// sweeps: ranging error versus azimuth, rate versus SNR and rate versus
// element count.

#pragma once

#include "leris/localization.hpp"
#include "leris/monte_carlo.hpp"
#include "leris/pattern_kernels.hpp"
#include "leris/routing.hpp"
#include "leris/scenario.hpp"

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace leris
{

struct UePose
{
    Vec3 position;
    Vec3 normal;
    double azimuth_rad = 0.0;
};

// Uniform position over the sampling rectangle, uniform azimuth, fixed elevation.
UePose sample_pose(const Scenario &scenario, std::mt19937_64 &rng);

Node ue_node(const UePose &pose);

// One VCSEL able to illuminate the UE. Each emitter scans its sub-sector, so
// the beam is taken as aligned with the UE (zero irradiance angle).
struct ObservedAnchor
{
    const Vcsel *vcsel = nullptr;
    double distance = 0.0;
    long double cos_incidence = 0.0L;
    long double los_a = 0.0L;
    long double los_b = 0.0L;
    long double measured_a = 0.0L;
    long double measured_b = 0.0L;
};

// Anchors on the active panels that see the UE inside their footprint and
// fall inside the PD field of view. noise_rng is only used in stochastic mode.
std::vector<ObservedAnchor> observe(const Scenario &scenario, std::span<const int> active_panels, const UePose &pose,
                                    std::mt19937_64 *noise_rng);

struct LocalizationOutcome
{
    std::optional<LocalizationEstimate> estimate;
    std::optional<ErrorKind> failure;
    std::string message;
    std::size_t observed = 0;
};

// Never throws for per-draw geometry or ranging failures; they are returned
// in `failure`.
LocalizationOutcome localize_pose(const Scenario &scenario, std::span<const int> active_panels, const UePose &pose,
                                  std::mt19937_64 *noise_rng);

// Gain normalizers for every (final panel, predecessor) pair of a scenario.
class FinalGainCache
{
public:
    explicit FinalGainCache(const Scenario &scenario);

    FinalGainFn gain_fn() const;
    std::size_t size() const { return normalizers_.size(); }

private:
    std::map<std::pair<int, int>, std::shared_ptr<const GainNormalizer>> normalizers_;
    std::optional<FinalGainFn> fallback_;
};

PatternContext final_panel_context(const LerisPanel &final_panel, const Node &predecessor, double wavenumber,
                                   PathDelayVariant variant);

std::vector<LerisPanel> active_panels(const Scenario &scenario, std::span<const int> ids);

// Best route for a known estimate. The budget's rate uses the scenario's own
// transmit SNR.
LinkBudget route_for(const Scenario &scenario, std::span<const LerisPanel> panels, const UePose &pose,
                     const Vec3 &estimate, const FinalGainFn &final_gain);

// ---- Sweeps ----------------------------------------------------------------

struct SweepRow
{
    double axis = 0.0;
    int panels = 0; // L
    Aggregate value;
};

struct SweepResult
{
    std::string figure;
    std::string axis_label;
    std::string value_label;
    std::vector<SweepRow> rows;
    std::uint64_t seed = 0;
    std::int64_t iterations = 0;
    std::string fingerprint;
    std::map<std::string, std::int64_t> counters;
    std::vector<std::string> warnings;
    std::vector<std::pair<std::string, double>> timings_s;
};

struct RunOptions
{
    std::int64_t iterations = 0; // 0: the configured figure iterations
    int workers = 0;
};

// Delta d (mm) of the strongest serving VCSEL at every azimuth step, per
// configured panel set. Uncovered azimuths give NaN with n = 0.
SweepResult run_error_vs_azimuth(const Scenario &scenario, const RunOptions &options = {});

SweepResult run_rate_vs_snr(const Scenario &scenario, const RunOptions &options = {});

SweepResult run_rate_vs_elements(const Scenario &scenario, const RunOptions &options = {});

// Noise-free localization round trip over random poses with every panel active.
struct RoundTripStats
{
    std::int64_t draws = 0;
    std::int64_t exact = 0;          // both errors below tolerance
    std::int64_t flagged = 0;        // raised a typed error
    std::int64_t silently_wrong = 0; // returned an estimate outside tolerance
    std::map<ErrorKind, std::int64_t> flagged_by_kind;
    double max_position_error_m = 0.0;    // over returned estimates
    double max_orientation_error_rad = 0.0;
};

RoundTripStats run_localization_round_trip(const Scenario &scenario, std::int64_t iterations, std::uint64_t seed,
                                           int workers, double tolerance = 1e-6);

// Deterministic CSV: axis,L,value,p5,p50,p95,n,seed with %.10g numbers.
std::string to_csv(const SweepResult &result);
std::string format_number(double v);

json sweep_summary(const SweepResult &result);

} // namespace leris
