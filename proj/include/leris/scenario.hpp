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

// Scenario configuration (JSON, boundary units: dB and degrees) and the
// linear-unit scenario built from it: panels, VCSEL layout, receiver and AP.

#pragma once

#include "leris/geometry.hpp"
#include "leris/mmwave_channel.hpp"
#include "leris/optical_channel.hpp"
#include "leris/routing.hpp"

#include "json.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace leris
{

using json = nlohmann::json;

inline constexpr int config_schema_version = 1;

// How the per-anchor range is obtained in the simulation harness. Automatic
// uses the mode ratio when noise is off and the known-incidence inversion
// otherwise.
enum class RangingMethod
{
    automatic,
    dual_mode,
    known_incidence
};

RangingMethod parse_ranging_method(const std::string &name);
std::string to_string(RangingMethod method);

struct PanelPlacement
{
    int id = 0;
    Vec3 center;
    std::optional<Vec3> normal; // inward wall normal when omitted
};

struct ArrayConfig
{
    int m_rows = 50;
    int n_cols = 50;
    std::optional<double> element_side_m; // half the mmWave wavelength when omitted
    double efficiency = 1.0;
    std::string delay_variant = "literal";
};

struct OpticalConfig
{
    double transmit_power_w = 0.01;
    double beam_waist_m = 5.6e-6;
    std::optional<double> mode_b_waist_m; // twice the mode-a waist when omitted
    std::optional<double> mode_b_power_w; // mode-a power when omitted
    double wavelength_m = 950e-9;
    double pd_area_m2 = 1e-4;
    double pd_fov_deg = 90.0;
    double responsivity_a_per_w = 0.7;
    double bandwidth_hz = 1e9;
    double noise_figure_db = 5.0;
    double rin_db_per_hz = -155.0;
    double load_ohms = 50.0;
    double temperature_k = 300.0;
    double noise_variance = 2.5e-12;
    std::string noise_mode = "fixed";
    double power_floor_w = 0.0;
    std::string ranging = "automatic";
};

struct LayoutConfig
{
    int vcsels_per_panel = 24;
    double panel_sector_deg = 120.0;
    double elevation_span_deg = 60.0;
    double vcsel_sector_deg = 5.0;
    std::vector<double> elevation_levels_deg{-25.0, -15.0, -5.0, 5.0, 15.0, 25.0};
    // side of the square VCSEL perimeter; the default M x N array footprint
    // when omitted (kept fixed when the element count is swept)
    std::optional<double> ring_side_m;
};

struct MmWaveConfig
{
    double wavelength_m = 0.01;
    double tx_power_w = 1.0;
    double tx_gain_db = 10.0;
    double noise_power_db = -130.0;
    double path_loss_exponent = 2.0;
    double ref_distance_m = 1.0;
    double ue_directivity_deg = 60.0;
    std::string rate_formula = "physical";
};

struct RoutingConfig
{
    Vec3 ap_position{5.0, -1.0, 1.5};
    Vec3 ap_boresight{0.0, 1.0, 0.0};
    int max_route_length = 0; // 0: no limit
};

struct QuadratureConfig
{
    double step_deg = 0.25;
    std::string domain = "hemisphere";
    double tolerance = 0.01;
    int normalizer_resolution = 0; // 0: automatic
};

struct SamplingConfig
{
    double x_lo = 0.0, x_hi = 10.0;
    double y_lo = 0.0, y_hi = 10.0;
    double z = 1.5;
    double elevation_deg = 0.0;
};

struct ExperimentConfig
{
    std::int64_t iterations = 100000;
    std::int64_t figure_iterations = 5000;
    std::uint64_t seed = 20260419;
    int workers = 0; // 0: OpenMP default
    double ring_radius_m = 3.0;
    Vec3 ring_center{5.0, 5.0, 1.5};
    double azimuth_step_deg = 1.0;
    std::vector<double> snr_db{90, 95, 100, 105, 110, 115, 120, 125, 130};
    double elements_snr_db = 130.0;
    std::vector<int> n_elements{100, 400, 900, 1600, 2500};
    std::map<int, std::vector<int>> panel_sets{{1, {2}}, {2, {1, 2}}, {4, {1, 2, 3, 4}}};
};

struct ScenarioConfig
{
    Room room;
    std::vector<PanelPlacement> panels{{1, {0.0, 5.0, 1.5}, std::nullopt},
                                       {2, {10.0, 5.0, 1.5}, std::nullopt},
                                       {3, {5.0, 0.0, 1.5}, std::nullopt},
                                       {4, {5.0, 10.0, 1.5}, std::nullopt}};
    ArrayConfig array;
    OpticalConfig optical;
    LayoutConfig layout;
    MmWaveConfig mmwave;
    RoutingConfig routing;
    QuadratureConfig quadrature;
    SamplingConfig sampling;
    ExperimentConfig experiment;
};

// Missing keys take defaults; unknown keys and type mismatches are errors.
ScenarioConfig config_from_json(const json &j);
json config_to_json(const ScenarioConfig &config);
ScenarioConfig load_config(const std::string &path);

// Sorted, compact serialization and its 64-bit FNV-1a hash (hex).
std::string canonical_config(const ScenarioConfig &config);
std::string config_fingerprint(const ScenarioConfig &config);

// All violations found; empty when the config is usable.
std::vector<std::string> validate_config(const ScenarioConfig &config);

struct Scenario
{
    ScenarioConfig config;
    Room room;
    std::vector<LerisPanel> panels;
    std::vector<Vcsel> vcsels;
    Photodetector pd;
    NoiseParams noise;
    NoiseMode noise_mode = NoiseMode::fixed;
    RangingMethod ranging = RangingMethod::automatic;
    MmWaveParams mmwave;
    RateFormula rate_formula = RateFormula::physical;
    PathDelayVariant delay_variant = PathDelayVariant::literal;
    GridSpec grid;
    Node ap;
    double panel_half_sector_rad = 0.0;
    double panel_half_elevation_rad = 0.0;

    const LerisPanel &panel(int id) const;
    std::vector<const Vcsel *> vcsels_of(int panel_id) const;
    FeasibilityLimits limits() const;
};

// Throws ValidationError listing every violation.
Scenario build_scenario(const ScenarioConfig &config);

// Same scenario with every panel resized to m x n elements (optical layout
// unchanged).
Scenario with_array_size(const Scenario &base, int m_rows, int n_cols);

// UE direction as seen from a VCSEL in its panel frame: azimuth about the
// panel's vertical axis (toward +x local) and elevation above the panel's
// horizontal plane.
struct VcselView
{
    double azimuth = 0.0;
    double elevation = 0.0;
    double distance = 0.0;
};

VcselView view_from(const Scenario &scenario, const Vcsel &vcsel, const Vec3 &ue_position);

// Same angles measured from the panel centre.
VcselView view_from_panel(const LerisPanel &panel, const Vec3 &ue_position);

// Inside the panel's azimuth sector and elevation span as seen from the VCSEL.
bool within_panel_footprint(const Scenario &scenario, const VcselView &view);

// The VCSEL owning the 5-degree sub-sector that contains the azimuth of a
// panel-centre view. Exactly one VCSEL of a panel owns any azimuth inside the
// panel sector.
bool owns_azimuth(const Scenario &scenario, const Vcsel &vcsel, const VcselView &panel_view);

// Horizontal unit normal at azimuth phi tilted up by the configured elevation.
Vec3 ue_normal(double azimuth_rad, double elevation_rad);

} // namespace leris
