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

// Cascaded route enumeration, per-segment feasibility and rate-maximizing
// route selection.

#pragma once

#include "leris/mmwave_channel.hpp"

#include <functional>
#include <span>
#include <vector>

namespace leris
{

enum class NodeKind
{
    access_point,
    panel,
    ue
};

struct Node
{
    NodeKind kind = NodeKind::panel;
    int id = 0; // panel id; -1 for the AP, -2 for the UE
    Vec3 position;
    Vec3 normal; // boresight for the AP, surface normal for panels and the UE
};

inline constexpr int ap_node_id = -1;
inline constexpr int ue_node_id = -2;

Node panel_node(const LerisPanel &panel);

struct FeasibilityLimits
{
    double ue_cone_rad = pi / 3.0; // UE antenna directivity
    double pd_fov_rad = pi / 2.0;  // photodetector half-angle
};

// Panels and the AP radiate into and accept from their open front half-space
// (grazing is infeasible). The UE accepts arrivals within both its antenna
// cone and the PD field of view, boundaries inclusive.
bool segment_feasible(const Node &from, const Node &to, const FeasibilityLimits &limits);

struct Route
{
    std::vector<int> panel_ids;
    std::vector<double> segment_lengths; // AP -> panel_1 -> ... -> panel_L -> UE
    std::vector<bool> feasibility;
    bool aggregate_feasible = false;
};

// Every ordered sequence of distinct panels, sorted by length and then
// lexicographically by id. max_length <= 0 means no limit.
std::vector<Route> enumerate_routes(std::span<const LerisPanel> panels, const Node &ap, const Node &ue,
                                    const FeasibilityLimits &limits, int max_length = 0);

struct LinkBudget
{
    Route route;
    bool feasible = false;
    double cascaded_gain = 0.0;
    double aperture = 0.0;
    double final_gain = 0.0; // G_L at the true UE direction
    double ue_gain = 0.0;
    double route_gain = 0.0; // product of the four terms above
    double path_loss = 0.0;
    double spectral_efficiency = 0.0;
    // estimated and true UE directions in the final panel frame
    SphericalAngles steered;
    SphericalAngles actual;
    double theta_u = 0.0;
};

// G_L of the final panel steered to `estimated` and observed at `actual`, with
// the predecessor node acting as the transmitter.
using FinalGainFn = std::function<double(const LerisPanel &final_panel, const Node &predecessor,
                                         const SphericalAngles &estimated, const SphericalAngles &actual)>;

// Final-panel gain from the (theta, phi) grid quadrature.
FinalGainFn quadrature_final_gain(const GridSpec &grid, PathDelayVariant variant, double wavenumber);

struct ChannelContext
{
    std::span<const LerisPanel> panels;
    Node ap;
    Node ue;              // true pose
    Vec3 ue_estimate;     // position the final panel steers toward
    MmWaveParams params;
    RateFormula rate_formula = RateFormula::physical;
    FinalGainFn final_gain;
};

// Evaluates one route. Rate is zero when the route is infeasible.
LinkBudget evaluate_route(const Route &route, const ChannelContext &ctx);

// Highest-rate budget; ties go to the shorter route, then the smaller ids.
// With no feasible route the result has feasible == false and zero rate.
LinkBudget best_route(std::span<const Route> routes, const ChannelContext &ctx);

// All per-route budgets in enumeration order (for reporting and oracles).
std::vector<LinkBudget> evaluate_routes(std::span<const Route> routes, const ChannelContext &ctx);

} // namespace leris
