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

#include "leris/routing.hpp"

#include <algorithm>
#include <map>

namespace leris
{
namespace
{

const LerisPanel &find_panel(std::span<const LerisPanel> panels, int id)
{
    for (const auto &p : panels)
        if (p.id == id)
            return p;
    throw ArgumentError("route references unknown panel " + std::to_string(id));
}

void permutations_of(std::vector<int> chosen, std::vector<std::vector<int>> &out)
{
    std::sort(chosen.begin(), chosen.end());
    do
        out.push_back(chosen);
    while (std::next_permutation(chosen.begin(), chosen.end()));
}

} // namespace

Node panel_node(const LerisPanel &panel) { return {NodeKind::panel, panel.id, panel.center, normalized(panel.normal)}; }

bool segment_feasible(const Node &from, const Node &to, const FeasibilityLimits &limits)
{
    if (from.kind == NodeKind::ue)
        return false;
    if (from.position == to.position)
        return false;
    const Vec3 d = unit_from_to(from.position, to.position);
    if (!(dot(from.normal, d) > 0.0))
        return false;
    const Vec3 arrival = -d; // receiver toward transmitter
    if (to.kind != NodeKind::ue)
        return dot(to.normal, arrival) > 0.0;
    const double theta = angle_between(to.normal, arrival);
    return theta <= limits.ue_cone_rad && theta <= limits.pd_fov_rad;
}

std::vector<Route> enumerate_routes(std::span<const LerisPanel> panels, const Node &ap, const Node &ue,
                                    const FeasibilityLimits &limits, int max_length)
{
    std::vector<int> ids;
    for (const auto &p : panels)
        ids.push_back(p.id);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw ArgumentError("panel ids must be distinct");
    const int n = static_cast<int>(ids.size());
    const int top = max_length > 0 ? std::min(max_length, n) : n;

    std::vector<std::vector<int>> sequences;
    for (int len = 1; len <= top; ++len)
    {
        std::vector<std::vector<int>> level;
        // subsets of size len in lexicographic order, then their permutations
        std::vector<bool> mask(static_cast<std::size_t>(n), false);
        std::fill(mask.begin(), mask.begin() + len, true);
        do
        {
            std::vector<int> chosen;
            for (int i = 0; i < n; ++i)
                if (mask[static_cast<std::size_t>(i)])
                    chosen.push_back(ids[static_cast<std::size_t>(i)]);
            permutations_of(chosen, level);
        } while (std::prev_permutation(mask.begin(), mask.end()));
        std::sort(level.begin(), level.end());
        sequences.insert(sequences.end(), level.begin(), level.end());
    }

    std::vector<Route> routes;
    routes.reserve(sequences.size());
    for (const auto &seq : sequences)
    {
        Route r;
        r.panel_ids = seq;
        std::vector<Node> chain{ap};
        for (int id : seq)
            chain.push_back(panel_node(find_panel(panels, id)));
        chain.push_back(ue);
        r.aggregate_feasible = true;
        for (std::size_t s = 0; s + 1 < chain.size(); ++s)
        {
            r.segment_lengths.push_back(distance(chain[s].position, chain[s + 1].position));
            const bool ok = segment_feasible(chain[s], chain[s + 1], limits);
            r.feasibility.push_back(ok);
            r.aggregate_feasible = r.aggregate_feasible && ok;
        }
        routes.push_back(std::move(r));
    }
    return routes;
}

FinalGainFn quadrature_final_gain(const GridSpec &grid, PathDelayVariant variant, double wavenumber)
{
    return [grid, variant, wavenumber](const LerisPanel &final_panel, const Node &predecessor,
                                       const SphericalAngles &estimated, const SphericalAngles &actual) {
        const Frame f = final_panel.frame();
        PatternContext ctx;
        ctx.wavenumber = wavenumber;
        ctx.tx = f.to_local(predecessor.position);
        ctx.rx = Vec3{};
        ctx.variant = variant;
        const PhaseProfile profile = steering_phase_profile(final_panel, estimated.theta, estimated.phi, ctx);
        return directional_gain(final_panel, profile, actual.theta, actual.phi, ctx, grid).gain;
    };
}

LinkBudget evaluate_route(const Route &route, const ChannelContext &ctx)
{
    if (route.panel_ids.empty())
        throw ArgumentError("route must contain at least one panel");
    LinkBudget b;
    b.route = route;
    b.feasible = route.aggregate_feasible;

    std::vector<LerisPanel> leading;
    for (std::size_t i = 0; i + 1 < route.panel_ids.size(); ++i)
        leading.push_back(find_panel(ctx.panels, route.panel_ids[i]));
    const LerisPanel &last = find_panel(ctx.panels, route.panel_ids.back());
    const Node predecessor =
        route.panel_ids.size() == 1 ? ctx.ap : panel_node(find_panel(ctx.panels, route.panel_ids[route.panel_ids.size() - 2]));

    b.cascaded_gain = cascaded_gain(leading, ctx.params.wavelength_m);
    b.aperture = effective_aperture(last, ctx.params.wavelength_m);
    b.path_loss = path_loss(route.segment_lengths, ctx.params);

    const Frame f = last.frame();
    b.actual = to_spherical(f.direction_to_local(ctx.ue.position - last.center));
    b.steered = to_spherical(f.direction_to_local(ctx.ue_estimate - last.center));
    b.theta_u = angle_between(ctx.ue.normal, last.center - ctx.ue.position);
    b.ue_gain = ue_antenna_gain(b.theta_u, ctx.params.ue_directivity_rad);

    if (!b.feasible)
        return b;
    if (!ctx.final_gain)
        throw ArgumentError("channel context has no final-panel gain model");
    b.final_gain = ctx.final_gain(last, predecessor, b.steered, b.actual);
    leading.push_back(last);
    b.route_gain = total_route_gain(leading, b.final_gain, b.theta_u, ctx.params);
    b.spectral_efficiency = spectral_efficiency(b.route_gain, b.path_loss, ctx.params, ctx.rate_formula);
    return b;
}

std::vector<LinkBudget> evaluate_routes(std::span<const Route> routes, const ChannelContext &ctx)
{
    // the final gain depends only on (final panel, predecessor); memoize it
    std::map<std::pair<int, int>, double> cache;
    ChannelContext local = ctx;
    const FinalGainFn inner = ctx.final_gain;
    local.final_gain = [&cache, inner](const LerisPanel &p, const Node &pred, const SphericalAngles &e,
                                       const SphericalAngles &a) {
        const auto key = std::make_pair(p.id, pred.id);
        const auto it = cache.find(key);
        if (it != cache.end())
            return it->second;
        const double g = inner(p, pred, e, a);
        cache.emplace(key, g);
        return g;
    };
    std::vector<LinkBudget> out;
    out.reserve(routes.size());
    for (const auto &r : routes)
        out.push_back(evaluate_route(r, local));
    return out;
}

LinkBudget best_route(std::span<const Route> routes, const ChannelContext &ctx)
{
    if (routes.empty())
        throw ArgumentError("no candidate routes");
    const auto budgets = evaluate_routes(routes, ctx);
    const LinkBudget *best = nullptr;
    for (const auto &b : budgets)
    {
        if (!b.feasible)
            continue;
        // budgets arrive shortest-first and lexicographic, so strict > keeps ties stable
        if (!best || b.spectral_efficiency > best->spectral_efficiency)
            best = &b;
    }
    if (!best)
    {
        LinkBudget none;
        none.feasible = false;
        return none;
    }
    return *best;
}

} // namespace leris
