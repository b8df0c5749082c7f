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

#include "leris/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

namespace leris
{
namespace
{

using LD = long double;
using Clock = std::chrono::steady_clock;

constexpr double status_ok = -1.0;
constexpr double status_no_route = 100.0;
const double nan_v = std::numeric_limits<double>::quiet_NaN();

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// 53 random bits in [0, 1); independent of the standard library's distributions.
double unit_uniform(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

LD noisy(LD los, const Scenario &sc, std::mt19937_64 *rng)
{
    const double pn = noise_power(static_cast<double>(los), sc.pd, sc.noise, sc.noise_mode);
    if (sc.noise_mode != NoiseMode::stochastic)
        return los + LD(pn);
    if (!rng)
        throw ArgumentError("stochastic noise requires a generator");
    std::normal_distribution<double> draw(0.0, std::sqrt(pn));
    return std::max(LD(0), los + LD(draw(*rng)));
}

bool use_dual_mode(const Scenario &sc)
{
    switch (sc.ranging)
    {
    case RangingMethod::dual_mode: return true;
    case RangingMethod::known_incidence: return false;
    case RangingMethod::automatic: return sc.noise_mode == NoiseMode::off;
    }
    return true;
}

std::string label_key(int L) { return "L" + std::to_string(L); }

void count_status(std::map<std::string, std::int64_t> &counters, const std::string &prefix, double status)
{
    if (std::isnan(status) || status == status_ok)
        return;
    if (status == status_no_route)
    {
        ++counters[prefix + ".no_feasible_route"];
        return;
    }
    ++counters[prefix + ".localization_failed"];
    ++counters[prefix + ".localization_failed." + to_string(static_cast<ErrorKind>(static_cast<int>(status)))];
}

void add_failures(SweepResult &r, const MonteCarloResult &mc)
{
    r.counters["failed_draws"] = mc.failed_draws;
    for (const auto &[kind, n] : mc.failures_by_kind)
        r.counters[std::string("failed_draws.") + to_string(kind)] = n;
    if (mc.failed_draws > 0)
        r.warnings.push_back(std::to_string(mc.failed_draws) + " draws failed and were excluded from the aggregates");
}

std::int64_t iterations_for(const Scenario &sc, const RunOptions &o)
{
    return o.iterations > 0 ? o.iterations : sc.config.experiment.figure_iterations;
}

// K = l_p G of the best route for one localized draw, with its status code.
std::pair<double, double> route_kernel_value(const Scenario &sc, std::span<const LerisPanel> panels,
                                             const UePose &pose, const LocalizationOutcome &loc,
                                             const FinalGainFn &gain)
{
    if (!loc.estimate)
        return {0.0, static_cast<double>(static_cast<int>(*loc.failure))};
    const LinkBudget b = route_for(sc, panels, pose, loc.estimate->position, gain);
    if (!b.feasible)
        return {0.0, status_no_route};
    return {b.route_gain * b.path_loss, status_ok};
}

double rate_at(double k, double snr_db, const Scenario &sc)
{
    MmWaveParams p = sc.mmwave;
    p.noise_power = p.tx_power_w / db_to_linear(snr_db);
    return spectral_efficiency(k, 1.0, p, sc.rate_formula);
}

} // namespace

UePose sample_pose(const Scenario &scenario, std::mt19937_64 &rng)
{
    const auto &s = scenario.config.sampling;
    UePose p;
    p.position.x = s.x_lo + (s.x_hi - s.x_lo) * unit_uniform(rng);
    p.position.y = s.y_lo + (s.y_hi - s.y_lo) * unit_uniform(rng);
    p.position.z = s.z;
    p.azimuth_rad = 2.0 * pi * unit_uniform(rng);
    p.normal = ue_normal(p.azimuth_rad, deg_to_rad(s.elevation_deg));
    return p;
}

Node ue_node(const UePose &pose) { return {NodeKind::ue, ue_node_id, pose.position, pose.normal}; }

std::vector<ObservedAnchor> observe(const Scenario &scenario, std::span<const int> active_panels, const UePose &pose,
                                    std::mt19937_64 *noise_rng)
{
    std::vector<ObservedAnchor> out;
    const LD floor = scenario.config.optical.power_floor_w;
    const LD area = scenario.pd.area_m2;
    for (int pid : active_panels)
        for (const Vcsel *v : scenario.vcsels_of(pid))
        {
            const VcselView view = view_from(scenario, *v, pose.position);
            if (!within_panel_footprint(scenario, view))
                continue;
            const LD dx = LD(v->position.x) - pose.position.x;
            const LD dy = LD(v->position.y) - pose.position.y;
            const LD dz = LD(v->position.z) - pose.position.z;
            const LD d = std::sqrt(dx * dx + dy * dy + dz * dz);
            if (!(d > 0))
                continue;
            const LD c = (dx * pose.normal.x + dy * pose.normal.y + dz * pose.normal.z) / d;
            if (!(c > 0) || std::acos(static_cast<double>(c)) > scenario.pd.fov_half_angle_rad)
                continue;
            ObservedAnchor a;
            a.vcsel = v;
            a.distance = static_cast<double>(d);
            a.cos_incidence = c;
            a.los_a = mode_coefficient<LD>(v->mode_a, area, d) * c;
            a.los_b = mode_coefficient<LD>(v->mode_b, area, d) * c;
            a.measured_a = noisy(a.los_a, scenario, noise_rng);
            a.measured_b = noisy(a.los_b, scenario, noise_rng);
            if (!(a.measured_a > floor) || !(a.measured_b > floor))
                continue;
            out.push_back(a);
        }
    return out;
}

LocalizationOutcome localize_pose(const Scenario &scenario, std::span<const int> active_panels, const UePose &pose,
                                  std::mt19937_64 *noise_rng)
{
    LocalizationOutcome out;
    try
    {
        const auto obs = observe(scenario, active_panels, pose, noise_rng);
        out.observed = obs.size();
        if (use_dual_mode(scenario))
        {
            std::vector<OpticalMeasurement> m;
            m.reserve(2 * obs.size());
            for (const auto &a : obs)
            {
                m.push_back({a.vcsel->id, ModeLabel::a, a.measured_a});
                m.push_back({a.vcsel->id, ModeLabel::b, a.measured_b});
            }
            LocalizeOptions lo;
            lo.power_floor_w = scenario.config.optical.power_floor_w;
            out.estimate = localize(m, scenario.vcsels, scenario.pd, scenario.room, lo);
        }
        else
        {
            std::vector<RangedAnchor> anchors;
            anchors.reserve(obs.size());
            for (const auto &a : obs)
            {
                const LD d = known_incidence_distance(a.measured_a, a.vcsel->mode_a, scenario.pd.area_m2,
                                                      a.cos_incidence);
                anchors.push_back({a.vcsel->id, a.vcsel->panel_id, a.vcsel->position, &a.vcsel->mode_a, d,
                                   a.measured_a});
            }
            out.estimate = solve_pose(anchors, scenario.pd.area_m2, scenario.room);
        }
    }
    catch (const Error &e)
    {
        if (e.kind() == ErrorKind::argument || e.kind() == ErrorKind::configuration)
            throw;
        out.estimate.reset();
        out.failure = e.kind();
        out.message = e.what();
    }
    return out;
}

PatternContext final_panel_context(const LerisPanel &final_panel, const Node &predecessor, double wavenumber,
                                   PathDelayVariant variant)
{
    PatternContext ctx;
    ctx.wavenumber = wavenumber;
    ctx.tx = final_panel.frame().to_local(predecessor.position);
    ctx.rx = Vec3{};
    ctx.variant = variant;
    return ctx;
}

FinalGainCache::FinalGainCache(const Scenario &scenario)
{
    const double k = scenario.mmwave.wavenumber();
    if (scenario.delay_variant != PathDelayVariant::literal)
    {
        fallback_ = quadrature_final_gain(scenario.grid, scenario.delay_variant, k);
        return;
    }
    for (const auto &p : scenario.panels)
    {
        std::vector<Node> preds{scenario.ap};
        for (const auto &q : scenario.panels)
            if (q.id != p.id)
                preds.push_back(panel_node(q));
        for (const auto &pred : preds)
        {
            const auto ctx = final_panel_context(p, pred, k, scenario.delay_variant);
            normalizers_[{p.id, pred.id}] = std::make_shared<const GainNormalizer>(
                p, ctx, scenario.config.quadrature.normalizer_resolution, scenario.grid.domain);
        }
    }
}

FinalGainFn FinalGainCache::gain_fn() const
{
    if (fallback_)
        return *fallback_;
    auto table = normalizers_;
    return [table](const LerisPanel &p, const Node &pred, const SphericalAngles &est, const SphericalAngles &act) {
        const auto it = table.find({p.id, pred.id});
        if (it == table.end())
            throw ArgumentError("no gain normalizer for panel " + std::to_string(p.id));
        return it->second->gain(est.theta, est.phi, act.theta, act.phi);
    };
}

std::vector<LerisPanel> active_panels(const Scenario &scenario, std::span<const int> ids)
{
    std::vector<LerisPanel> out;
    for (int id : ids)
        out.push_back(scenario.panel(id));
    return out;
}

LinkBudget route_for(const Scenario &scenario, std::span<const LerisPanel> panels, const UePose &pose,
                     const Vec3 &estimate, const FinalGainFn &final_gain)
{
    const Node ue = ue_node(pose);
    const auto routes =
        enumerate_routes(panels, scenario.ap, ue, scenario.limits(), scenario.config.routing.max_route_length);
    ChannelContext ctx;
    ctx.panels = panels;
    ctx.ap = scenario.ap;
    ctx.ue = ue;
    ctx.ue_estimate = estimate;
    ctx.params = scenario.mmwave;
    ctx.rate_formula = scenario.rate_formula;
    ctx.final_gain = final_gain;
    return best_route(routes, ctx);
}

SweepResult run_error_vs_azimuth(const Scenario &scenario, const RunOptions &options)
{
    (void)options;
    const auto t0 = Clock::now();
    const auto &e = scenario.config.experiment;
    SweepResult r;
    r.figure = "fig2";
    r.axis_label = "azimuth_deg";
    r.value_label = "mean_dd_mm";
    r.seed = e.seed;
    r.iterations = 1;
    r.fingerprint = config_fingerprint(scenario.config);

    const int steps = static_cast<int>(std::ceil(360.0 / e.azimuth_step_deg - 1e-9));
    const double elev = deg_to_rad(scenario.config.sampling.elevation_deg);
    for (const auto &[L, ids] : e.panel_sets)
    {
        for (int s = 0; s < steps; ++s)
        {
            const double az_deg = s * e.azimuth_step_deg;
            const double az = deg_to_rad(az_deg);
            UePose pose;
            pose.position = e.ring_center + e.ring_radius_m * Vec3{std::cos(az), std::sin(az), 0.0};
            pose.normal = ue_normal(az, elev);
            pose.azimuth_rad = az;

            const Vcsel *best = nullptr;
            double best_power = -1.0, best_d = 0.0;
            for (int pid : ids)
            {
                const VcselView centre = view_from_panel(scenario.panel(pid), pose.position);
                for (const Vcsel *v : scenario.vcsels_of(pid))
                {
                    const VcselView view = view_from(scenario, *v, pose.position);
                    if (!within_panel_footprint(scenario, view) || !owns_azimuth(scenario, *v, centre))
                        continue;
                    const double c = incidence_cos(pose.normal, v->position, pose.position);
                    if (!(c > 0.0) || std::acos(c) > scenario.pd.fov_half_angle_rad)
                        continue;
                    const double power = mode_coefficient<double>(v->mode_a, scenario.pd.area_m2, view.distance) * c;
                    if (power > best_power)
                    {
                        best = v;
                        best_power = power;
                        best_d = view.distance;
                    }
                }
            }

            SweepRow row;
            row.axis = az_deg;
            row.panels = L;
            row.value = aggregate(std::vector<double>{nan_v});
            if (!best)
            {
                ++r.counters[label_key(L) + ".not_covered"];
                r.rows.push_back(row);
                continue;
            }
            const double pn = noise_power(best_power, scenario.pd, scenario.noise, scenario.noise_mode);
            const double alpha = pn > 0.0 ? best_power / pn : std::numeric_limits<double>::infinity();
            try
            {
                const double dd_mm = 1e3 * ranging_error(best_d, best->mode_a.rayleigh_range_m(), alpha);
                row.value = aggregate(std::vector<double>{dd_mm});
            }
            catch (const NoiseDominatedError &)
            {
                ++r.counters[label_key(L) + ".noise_dominated"];
            }
            r.rows.push_back(row);
        }
    }
    r.timings_s.emplace_back("sweep", seconds_since(t0));
    return r;
}

SweepResult run_rate_vs_snr(const Scenario &scenario, const RunOptions &options)
{
    const auto &e = scenario.config.experiment;
    SweepResult r;
    r.figure = "fig3";
    r.axis_label = "snr_db";
    r.value_label = "mean_R";
    r.seed = e.seed;
    r.iterations = iterations_for(scenario, options);
    r.fingerprint = config_fingerprint(scenario.config);

    std::vector<int> labels;
    std::vector<std::vector<int>> ids;
    std::vector<std::vector<LerisPanel>> panels;
    for (const auto &[L, set] : e.panel_sets)
    {
        labels.push_back(L);
        ids.push_back(set);
        panels.push_back(active_panels(scenario, set));
    }
    const std::size_t nl = labels.size();

    auto t0 = Clock::now();
    const FinalGainCache cache(scenario);
    const FinalGainFn gain = cache.gain_fn();
    r.timings_s.emplace_back("gain_normalizers", seconds_since(t0));

    t0 = Clock::now();
    const auto mc = monte_carlo(r.iterations, e.seed, options.workers, 2 * nl,
                                [&](std::int64_t, std::mt19937_64 &rng, std::span<double> out) {
                                    const UePose pose = sample_pose(scenario, rng);
                                    const std::uint64_t base = rng();
                                    for (std::size_t l = 0; l < nl; ++l)
                                    {
                                        std::mt19937_64 noise_rng(substream_seed(base, l));
                                        const auto loc = localize_pose(scenario, ids[l], pose, &noise_rng);
                                        const auto [k, status] =
                                            route_kernel_value(scenario, panels[l], pose, loc, gain);
                                        out[2 * l] = k;
                                        out[2 * l + 1] = status;
                                    }
                                });
    r.timings_s.emplace_back("monte_carlo", seconds_since(t0));

    t0 = Clock::now();
    r.counters["draws"] = r.iterations;
    add_failures(r, mc);
    for (std::size_t l = 0; l < nl; ++l)
    {
        const auto status = mc.column(2 * l + 1);
        for (double s : status)
            count_status(r.counters, label_key(labels[l]), s);
    }
    for (double snr : e.snr_db)
        for (std::size_t l = 0; l < nl; ++l)
        {
            auto k = mc.column(2 * l);
            for (double &v : k)
                if (!std::isnan(v))
                    v = rate_at(v, snr, scenario);
            r.rows.push_back({snr, labels[l], aggregate(k)});
        }
    r.timings_s.emplace_back("aggregate", seconds_since(t0));
    return r;
}

SweepResult run_rate_vs_elements(const Scenario &scenario, const RunOptions &options)
{
    const auto &e = scenario.config.experiment;
    SweepResult r;
    r.figure = "fig4";
    r.axis_label = "n_elements";
    r.value_label = "mean_R";
    r.seed = e.seed;
    r.iterations = iterations_for(scenario, options);
    r.fingerprint = config_fingerprint(scenario.config);

    std::vector<int> labels;
    std::vector<std::vector<int>> ids;
    for (const auto &[L, set] : e.panel_sets)
    {
        labels.push_back(L);
        ids.push_back(set);
    }
    const std::size_t nl = labels.size();
    const std::size_t nn = e.n_elements.size();

    auto t0 = Clock::now();
    std::vector<Scenario> sized;
    std::vector<FinalGainFn> gains;
    std::vector<std::vector<std::vector<LerisPanel>>> panels(nn);
    for (std::size_t j = 0; j < nn; ++j)
    {
        const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(e.n_elements[j]))));
        sized.push_back(with_array_size(scenario, side, side));
        gains.push_back(FinalGainCache(sized.back()).gain_fn());
        for (std::size_t l = 0; l < nl; ++l)
            panels[j].push_back(active_panels(sized.back(), ids[l]));
    }
    r.timings_s.emplace_back("gain_normalizers", seconds_since(t0));

    // columns: status per L, then K per (L, N)
    const std::size_t width = nl + nl * nn;
    t0 = Clock::now();
    const auto mc = monte_carlo(r.iterations, e.seed, options.workers, width,
                                [&](std::int64_t, std::mt19937_64 &rng, std::span<double> out) {
                                    const UePose pose = sample_pose(scenario, rng);
                                    const std::uint64_t base = rng();
                                    for (std::size_t l = 0; l < nl; ++l)
                                    {
                                        std::mt19937_64 noise_rng(substream_seed(base, l));
                                        const auto loc = localize_pose(scenario, ids[l], pose, &noise_rng);
                                        for (std::size_t j = 0; j < nn; ++j)
                                        {
                                            const auto [k, status] =
                                                route_kernel_value(sized[j], panels[j][l], pose, loc, gains[j]);
                                            out[nl + l * nn + j] = k;
                                            if (j == 0)
                                                out[l] = status;
                                        }
                                    }
                                });
    r.timings_s.emplace_back("monte_carlo", seconds_since(t0));

    t0 = Clock::now();
    r.counters["draws"] = r.iterations;
    add_failures(r, mc);
    for (std::size_t l = 0; l < nl; ++l)
        for (double s : mc.column(l))
            count_status(r.counters, label_key(labels[l]), s);
    for (std::size_t j = 0; j < nn; ++j)
        for (std::size_t l = 0; l < nl; ++l)
        {
            auto k = mc.column(nl + l * nn + j);
            for (double &v : k)
                if (!std::isnan(v))
                    v = rate_at(v, e.elements_snr_db, scenario);
            r.rows.push_back({static_cast<double>(e.n_elements[j]), labels[l], aggregate(k)});
        }
    r.timings_s.emplace_back("aggregate", seconds_since(t0));
    return r;
}

RoundTripStats run_localization_round_trip(const Scenario &scenario, std::int64_t iterations, std::uint64_t seed,
                                           int workers, double tolerance)
{
    Scenario sc = scenario;
    sc.noise_mode = NoiseMode::off;
    sc.ranging = RangingMethod::automatic;
    std::vector<int> all;
    for (const auto &p : sc.panels)
        all.push_back(p.id);

    const auto mc = monte_carlo(iterations, seed, workers, 3, [&](std::int64_t, std::mt19937_64 &rng, std::span<double> out) {
        const UePose pose = sample_pose(sc, rng);
        const auto loc = localize_pose(sc, all, pose, nullptr);
        if (!loc.estimate)
        {
            out[0] = static_cast<double>(static_cast<int>(*loc.failure));
            out[1] = out[2] = nan_v;
            return;
        }
        out[0] = status_ok;
        out[1] = distance(loc.estimate->position, pose.position);
        out[2] = angle_between(loc.estimate->orientation, pose.normal);
    });

    RoundTripStats s;
    s.draws = iterations;
    s.flagged = mc.failed_draws;
    for (const auto &[kind, n] : mc.failures_by_kind)
        s.flagged_by_kind[kind] += n;
    for (std::int64_t i = 0; i < iterations; ++i)
    {
        const auto d = mc.draw(i);
        if (std::isnan(d[0]))
            continue;
        if (d[0] != status_ok)
        {
            ++s.flagged;
            ++s.flagged_by_kind[static_cast<ErrorKind>(static_cast<int>(d[0]))];
            continue;
        }
        s.max_position_error_m = std::max(s.max_position_error_m, d[1]);
        s.max_orientation_error_rad = std::max(s.max_orientation_error_rad, d[2]);
        if (d[1] < tolerance && d[2] < tolerance)
            ++s.exact;
        else
            ++s.silently_wrong;
    }
    return s;
}

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v == 0.0 ? 0.0 : v);
    return buf;
}

std::string to_csv(const SweepResult &result)
{
    std::string out = result.axis_label + ",L," + result.value_label + ",p5,p50,p95,n,seed\n";
    for (const auto &row : result.rows)
    {
        out += format_number(row.axis) + "," + std::to_string(row.panels) + "," + format_number(row.value.mean) + "," +
               format_number(row.value.p5) + "," + format_number(row.value.p50) + "," + format_number(row.value.p95) +
               "," + std::to_string(row.value.n) + "," + std::to_string(result.seed) + "\n";
    }
    return out;
}

json sweep_summary(const SweepResult &result)
{
    json j;
    j["figure"] = result.figure;
    j["seed"] = result.seed;
    j["iterations"] = result.iterations;
    j["config_fingerprint"] = result.fingerprint;
    j["counters"] = result.counters;
    j["warnings"] = result.warnings;
    json timings = json::object();
    for (const auto &[stage, s] : result.timings_s)
        timings[stage] = s;
    j["timings_s"] = timings;
    json se = json::array();
    for (const auto &row : result.rows)
        se.push_back({{result.axis_label, row.axis},
                      {"L", row.panels},
                      {"std_error", std::isnan(row.value.std_error) ? json(nullptr) : json(row.value.std_error)}});
    j["standard_errors"] = se;
    return j;
}

} // namespace leris
