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

#include "leris/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace leris
{
namespace
{

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

json vec_to_json(const Vec3 &v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from_json(const json &j, const std::string &key)
{
    if (!j.is_array() || j.size() != 3)
        throw ConfigError("'" + key + "' must be an array of three numbers");
    for (const auto &e : j)
        if (!e.is_number())
            throw ConfigError("'" + key + "' must be an array of three numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

// Reads one JSON object section, remembering which keys were consumed so that
// misspelled keys are reported instead of silently ignored.
class Section
{
public:
    Section(const json &j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object())
            throw ConfigError("'" + path_ + "' must be a JSON object");
    }

    template <class T>
    void get(const char *key, T &out)
    {
        seen_.insert(key);
        const auto it = j_.find(key);
        if (it == j_.end() || it->is_null())
            return;
        try
        {
            out = it->template get<T>();
        }
        catch (const json::exception &)
        {
            throw ConfigError("'" + path_ + "." + key + "' has the wrong type");
        }
    }

    void get_number(const char *key, double &out)
    {
        seen_.insert(key);
        const auto it = j_.find(key);
        if (it == j_.end() || it->is_null())
            return;
        if (!it->is_number())
            throw ConfigError("'" + path_ + "." + key + "' must be a number");
        out = it->get<double>();
    }

    void get_optional(const char *key, std::optional<double> &out)
    {
        seen_.insert(key);
        const auto it = j_.find(key);
        if (it == j_.end() || it->is_null())
            return;
        if (!it->is_number())
            throw ConfigError("'" + path_ + "." + key + "' must be a number or null");
        out = it->get<double>();
    }

    void get_vec(const char *key, Vec3 &out)
    {
        seen_.insert(key);
        const auto it = j_.find(key);
        if (it == j_.end() || it->is_null())
            return;
        out = vec_from_json(*it, path_ + "." + key);
    }

    const json *sub(const char *key)
    {
        seen_.insert(key);
        const auto it = j_.find(key);
        if (it == j_.end() || it->is_null())
            return nullptr;
        return &*it;
    }

    void finish() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key()))
                throw ConfigError("unknown configuration key '" + path_ + "." + it.key() + "'");
    }

private:
    const json &j_;
    std::string path_;
    std::set<std::string> seen_;
};

json optional_json(const std::optional<double> &v) { return v ? json(*v) : json(nullptr); }

// Point at arc length s along the perimeter of a w x h rectangle centred at
// the origin, starting at the (-w/2, -h/2) corner and running along +x first.
std::pair<double, double> perimeter_point(double w, double h, double s)
{
    if (s < w)
        return {-w / 2 + s, -h / 2};
    s -= w;
    if (s < h)
        return {w / 2, -h / 2 + s};
    s -= h;
    if (s < w)
        return {w / 2 - s, h / 2};
    s -= w;
    return {-w / 2, h / 2 - s};
}

bool on_boundary(const Room &room, const Vec3 &p, double tol = 1e-9)
{
    if (!room.contains(p, tol))
        return false;
    return std::abs(p.x - room.lo.x) < tol || std::abs(p.x - room.hi.x) < tol || std::abs(p.y - room.lo.y) < tol ||
           std::abs(p.y - room.hi.y) < tol || std::abs(p.z - room.lo.z) < tol || std::abs(p.z - room.hi.z) < tol;
}

Vec3 inward_normal(const Room &room, const Vec3 &p, double tol = 1e-9)
{
    if (std::abs(p.x - room.lo.x) < tol)
        return {1, 0, 0};
    if (std::abs(p.x - room.hi.x) < tol)
        return {-1, 0, 0};
    if (std::abs(p.y - room.lo.y) < tol)
        return {0, 1, 0};
    if (std::abs(p.y - room.hi.y) < tol)
        return {0, -1, 0};
    if (std::abs(p.z - room.lo.z) < tol)
        return {0, 0, 1};
    return {0, 0, -1};
}

} // namespace

RangingMethod parse_ranging_method(const std::string &name)
{
    if (name == "automatic")
        return RangingMethod::automatic;
    if (name == "dual_mode")
        return RangingMethod::dual_mode;
    if (name == "known_incidence")
        return RangingMethod::known_incidence;
    throw ConfigError("unknown ranging method '" + name + "' (expected automatic|dual_mode|known_incidence)");
}

std::string to_string(RangingMethod method)
{
    switch (method)
    {
    case RangingMethod::automatic: return "automatic";
    case RangingMethod::dual_mode: return "dual_mode";
    case RangingMethod::known_incidence: return "known_incidence";
    }
    return "automatic";
}

ScenarioConfig config_from_json(const json &j)
{
    ScenarioConfig c;
    Section top(j, "config");
    int version = config_schema_version;
    top.get("schema_version", version);
    if (version != config_schema_version)
        throw ConfigError("unsupported config schema_version " + std::to_string(version));

    if (const json *r = top.sub("room"))
    {
        Section s(*r, "room");
        s.get_vec("lo", c.room.lo);
        s.get_vec("hi", c.room.hi);
        s.finish();
    }
    if (const json *p = top.sub("panels"))
    {
        if (!p->is_array())
            throw ConfigError("'panels' must be an array");
        c.panels.clear();
        for (const auto &e : *p)
        {
            Section s(e, "panels[]");
            PanelPlacement pl;
            s.get("id", pl.id);
            s.get_vec("center", pl.center);
            if (const json *n = s.sub("normal"))
                pl.normal = vec_from_json(*n, "panels[].normal");
            s.finish();
            c.panels.push_back(pl);
        }
    }
    if (const json *a = top.sub("array"))
    {
        Section s(*a, "array");
        s.get("m_rows", c.array.m_rows);
        s.get("n_cols", c.array.n_cols);
        s.get_optional("element_side_m", c.array.element_side_m);
        s.get_number("efficiency", c.array.efficiency);
        s.get("delay_variant", c.array.delay_variant);
        s.finish();
    }
    if (const json *o = top.sub("optical"))
    {
        auto &oc = c.optical;
        Section s(*o, "optical");
        s.get_number("transmit_power_w", oc.transmit_power_w);
        s.get_number("beam_waist_m", oc.beam_waist_m);
        s.get_optional("mode_b_waist_m", oc.mode_b_waist_m);
        s.get_optional("mode_b_power_w", oc.mode_b_power_w);
        s.get_number("wavelength_m", oc.wavelength_m);
        s.get_number("pd_area_m2", oc.pd_area_m2);
        s.get_number("pd_fov_deg", oc.pd_fov_deg);
        s.get_number("responsivity_a_per_w", oc.responsivity_a_per_w);
        s.get_number("bandwidth_hz", oc.bandwidth_hz);
        s.get_number("noise_figure_db", oc.noise_figure_db);
        s.get_number("rin_db_per_hz", oc.rin_db_per_hz);
        s.get_number("load_ohms", oc.load_ohms);
        s.get_number("temperature_k", oc.temperature_k);
        s.get_number("noise_variance", oc.noise_variance);
        s.get("noise_mode", oc.noise_mode);
        s.get_number("power_floor_w", oc.power_floor_w);
        s.get("ranging", oc.ranging);
        s.finish();
    }
    if (const json *l = top.sub("layout"))
    {
        auto &lc = c.layout;
        Section s(*l, "layout");
        s.get("vcsels_per_panel", lc.vcsels_per_panel);
        s.get_number("panel_sector_deg", lc.panel_sector_deg);
        s.get_number("elevation_span_deg", lc.elevation_span_deg);
        s.get_number("vcsel_sector_deg", lc.vcsel_sector_deg);
        s.get("elevation_levels_deg", lc.elevation_levels_deg);
        s.get_optional("ring_side_m", lc.ring_side_m);
        s.finish();
    }
    if (const json *m = top.sub("mmwave"))
    {
        auto &mc = c.mmwave;
        Section s(*m, "mmwave");
        s.get_number("wavelength_m", mc.wavelength_m);
        s.get_number("tx_power_w", mc.tx_power_w);
        s.get_number("tx_gain_db", mc.tx_gain_db);
        s.get_number("noise_power_db", mc.noise_power_db);
        s.get_number("path_loss_exponent", mc.path_loss_exponent);
        s.get_number("ref_distance_m", mc.ref_distance_m);
        s.get_number("ue_directivity_deg", mc.ue_directivity_deg);
        s.get("rate_formula", mc.rate_formula);
        s.finish();
    }
    if (const json *r = top.sub("routing"))
    {
        Section s(*r, "routing");
        s.get_vec("ap_position", c.routing.ap_position);
        s.get_vec("ap_boresight", c.routing.ap_boresight);
        s.get("max_route_length", c.routing.max_route_length);
        s.finish();
    }
    if (const json *q = top.sub("quadrature"))
    {
        Section s(*q, "quadrature");
        s.get_number("step_deg", c.quadrature.step_deg);
        s.get("domain", c.quadrature.domain);
        s.get_number("tolerance", c.quadrature.tolerance);
        s.get("normalizer_resolution", c.quadrature.normalizer_resolution);
        s.finish();
    }
    if (const json *sm = top.sub("sampling"))
    {
        Section s(*sm, "sampling");
        s.get_number("x_lo", c.sampling.x_lo);
        s.get_number("x_hi", c.sampling.x_hi);
        s.get_number("y_lo", c.sampling.y_lo);
        s.get_number("y_hi", c.sampling.y_hi);
        s.get_number("z", c.sampling.z);
        s.get_number("elevation_deg", c.sampling.elevation_deg);
        s.finish();
    }
    if (const json *e = top.sub("experiment"))
    {
        auto &ec = c.experiment;
        Section s(*e, "experiment");
        s.get("iterations", ec.iterations);
        s.get("figure_iterations", ec.figure_iterations);
        s.get("seed", ec.seed);
        s.get("workers", ec.workers);
        s.get_number("ring_radius_m", ec.ring_radius_m);
        s.get_vec("ring_center", ec.ring_center);
        s.get_number("azimuth_step_deg", ec.azimuth_step_deg);
        s.get("snr_db", ec.snr_db);
        s.get_number("elements_snr_db", ec.elements_snr_db);
        s.get("n_elements", ec.n_elements);
        if (const json *ps = s.sub("panel_sets"))
        {
            if (!ps->is_object())
                throw ConfigError("'experiment.panel_sets' must map a label to a panel id list");
            ec.panel_sets.clear();
            for (auto it = ps->begin(); it != ps->end(); ++it)
            {
                int label = 0;
                try
                {
                    std::size_t used = 0;
                    label = std::stoi(it.key(), &used);
                    if (used != it.key().size())
                        throw std::invalid_argument("trailing");
                    ec.panel_sets[label] = it.value().get<std::vector<int>>();
                }
                catch (const std::exception &)
                {
                    throw ConfigError("'experiment.panel_sets' entry '" + it.key() + "' is malformed");
                }
            }
        }
        s.finish();
    }
    top.finish();
    return c;
}

json config_to_json(const ScenarioConfig &c)
{
    json j;
    j["schema_version"] = config_schema_version;
    j["room"] = {{"lo", vec_to_json(c.room.lo)}, {"hi", vec_to_json(c.room.hi)}};
    json panels = json::array();
    for (const auto &p : c.panels)
        panels.push_back({{"id", p.id}, {"center", vec_to_json(p.center)},
                          {"normal", p.normal ? vec_to_json(*p.normal) : json(nullptr)}});
    j["panels"] = panels;
    j["array"] = {{"m_rows", c.array.m_rows},
                  {"n_cols", c.array.n_cols},
                  {"element_side_m", optional_json(c.array.element_side_m)},
                  {"efficiency", c.array.efficiency},
                  {"delay_variant", c.array.delay_variant}};
    const auto &o = c.optical;
    j["optical"] = {{"transmit_power_w", o.transmit_power_w},
                    {"beam_waist_m", o.beam_waist_m},
                    {"mode_b_waist_m", optional_json(o.mode_b_waist_m)},
                    {"mode_b_power_w", optional_json(o.mode_b_power_w)},
                    {"wavelength_m", o.wavelength_m},
                    {"pd_area_m2", o.pd_area_m2},
                    {"pd_fov_deg", o.pd_fov_deg},
                    {"responsivity_a_per_w", o.responsivity_a_per_w},
                    {"bandwidth_hz", o.bandwidth_hz},
                    {"noise_figure_db", o.noise_figure_db},
                    {"rin_db_per_hz", o.rin_db_per_hz},
                    {"load_ohms", o.load_ohms},
                    {"temperature_k", o.temperature_k},
                    {"noise_variance", o.noise_variance},
                    {"noise_mode", o.noise_mode},
                    {"power_floor_w", o.power_floor_w},
                    {"ranging", o.ranging}};
    const auto &l = c.layout;
    j["layout"] = {{"vcsels_per_panel", l.vcsels_per_panel},
                   {"panel_sector_deg", l.panel_sector_deg},
                   {"elevation_span_deg", l.elevation_span_deg},
                   {"vcsel_sector_deg", l.vcsel_sector_deg},
                   {"elevation_levels_deg", l.elevation_levels_deg},
                   {"ring_side_m", optional_json(l.ring_side_m)}};
    const auto &m = c.mmwave;
    j["mmwave"] = {{"wavelength_m", m.wavelength_m},
                   {"tx_power_w", m.tx_power_w},
                   {"tx_gain_db", m.tx_gain_db},
                   {"noise_power_db", m.noise_power_db},
                   {"path_loss_exponent", m.path_loss_exponent},
                   {"ref_distance_m", m.ref_distance_m},
                   {"ue_directivity_deg", m.ue_directivity_deg},
                   {"rate_formula", m.rate_formula}};
    j["routing"] = {{"ap_position", vec_to_json(c.routing.ap_position)},
                    {"ap_boresight", vec_to_json(c.routing.ap_boresight)},
                    {"max_route_length", c.routing.max_route_length}};
    j["quadrature"] = {{"step_deg", c.quadrature.step_deg},
                       {"domain", c.quadrature.domain},
                       {"tolerance", c.quadrature.tolerance},
                       {"normalizer_resolution", c.quadrature.normalizer_resolution}};
    j["sampling"] = {{"x_lo", c.sampling.x_lo}, {"x_hi", c.sampling.x_hi}, {"y_lo", c.sampling.y_lo},
                     {"y_hi", c.sampling.y_hi}, {"z", c.sampling.z},     {"elevation_deg", c.sampling.elevation_deg}};
    const auto &e = c.experiment;
    json sets = json::object();
    for (const auto &[label, ids] : e.panel_sets)
        sets[std::to_string(label)] = ids;
    j["experiment"] = {{"iterations", e.iterations},
                       {"figure_iterations", e.figure_iterations},
                       {"seed", e.seed},
                       {"workers", e.workers},
                       {"ring_radius_m", e.ring_radius_m},
                       {"ring_center", vec_to_json(e.ring_center)},
                       {"azimuth_step_deg", e.azimuth_step_deg},
                       {"snr_db", e.snr_db},
                       {"elements_snr_db", e.elements_snr_db},
                       {"n_elements", e.n_elements},
                       {"panel_sets", sets}};
    return j;
}

ScenarioConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file '" + path + "'");
    json j;
    try
    {
        j = json::parse(in);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

std::string canonical_config(const ScenarioConfig &config) { return config_to_json(config).dump(); }

std::string config_fingerprint(const ScenarioConfig &config)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical_config(config))
    {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::string> validate_config(const ScenarioConfig &c)
{
    std::vector<std::string> v;
    auto need = [&v](bool ok, const std::string &msg) {
        if (!ok)
            v.push_back(msg);
    };
    need(c.room.hi.x > c.room.lo.x && c.room.hi.y > c.room.lo.y && c.room.hi.z > c.room.lo.z,
         "room extents must be positive");
    need(!c.panels.empty(), "at least one panel is required");
    std::set<int> ids;
    for (const auto &p : c.panels)
    {
        need(ids.insert(p.id).second, "duplicate panel id " + std::to_string(p.id));
        need(p.id >= 0, "panel ids must be non-negative");
        need(on_boundary(c.room, p.center), "panel " + std::to_string(p.id) + " centre is not on the room boundary");
        if (p.normal)
            need(norm(*p.normal) > 0.0, "panel " + std::to_string(p.id) + " normal is zero");
    }
    need(c.array.m_rows >= 1 && c.array.n_cols >= 1, "array needs at least one element per side");
    need(!c.array.element_side_m || *c.array.element_side_m > 0.0, "element side must be positive");
    need(c.array.efficiency > 0.0 && c.array.efficiency <= 1.0, "array efficiency must lie in (0, 1]");
    need(c.array.delay_variant == "literal" || c.array.delay_variant == "symmetric",
         "array.delay_variant must be literal or symmetric");

    const auto &o = c.optical;
    need(o.transmit_power_w > 0.0, "optical transmit power must be positive");
    need(o.beam_waist_m > 0.0, "beam waist must be positive");
    need(!o.mode_b_waist_m || *o.mode_b_waist_m > 0.0, "mode-b waist must be positive");
    need(!o.mode_b_power_w || *o.mode_b_power_w > 0.0, "mode-b power must be positive");
    need(o.mode_b_waist_m.value_or(2.0 * o.beam_waist_m) != o.beam_waist_m,
         "mode-b waist must differ from mode a (distinct Rayleigh ranges)");
    need(o.wavelength_m > 0.0, "optical wavelength must be positive");
    need(o.pd_area_m2 > 0.0, "PD area must be positive");
    need(o.pd_fov_deg > 0.0 && o.pd_fov_deg <= 90.0, "PD FoV half-angle must lie in (0, 90] degrees");
    need(o.responsivity_a_per_w > 0.0 && o.bandwidth_hz > 0.0 && o.load_ohms > 0.0 && o.temperature_k > 0.0,
         "receiver constants must be positive");
    need(o.noise_variance > 0.0, "noise variance must be positive");
    need(o.power_floor_w >= 0.0, "power floor must be non-negative");
    try
    {
        parse_noise_mode(o.noise_mode);
    }
    catch (const Error &e)
    {
        v.push_back(e.what());
    }
    try
    {
        parse_ranging_method(o.ranging);
    }
    catch (const Error &e)
    {
        v.push_back(e.what());
    }

    const auto &l = c.layout;
    need(l.vcsels_per_panel >= 1, "vcsels_per_panel must be at least 1");
    need(l.panel_sector_deg > 0.0 && l.panel_sector_deg < 180.0, "panel sector must lie in (0, 180) degrees");
    need(l.elevation_span_deg > 0.0 && l.elevation_span_deg < 180.0, "elevation span must lie in (0, 180) degrees");
    need(l.vcsel_sector_deg > 0.0, "VCSEL sector width must be positive");
    need(l.vcsels_per_panel < 1 ||
             std::abs(l.vcsels_per_panel * l.vcsel_sector_deg - l.panel_sector_deg) < 1e-9 * l.panel_sector_deg,
         "vcsels_per_panel x vcsel_sector_deg must equal panel_sector_deg");
    need(!l.elevation_levels_deg.empty(), "at least one elevation level is required");
    for (double e : l.elevation_levels_deg)
        need(std::abs(e) <= l.elevation_span_deg / 2.0, "elevation levels must lie inside the elevation span");
    need(!l.ring_side_m || *l.ring_side_m > 0.0, "VCSEL ring side must be positive");

    const auto &m = c.mmwave;
    need(m.wavelength_m > 0.0 && m.tx_power_w > 0.0 && m.path_loss_exponent > 0.0 && m.ref_distance_m > 0.0,
         "mmWave parameters must be positive");
    need(m.ue_directivity_deg > 0.0 && m.ue_directivity_deg <= 180.0, "UE directivity must lie in (0, 180] degrees");
    need(m.rate_formula == "physical" || m.rate_formula == "literal", "mmwave.rate_formula must be physical or literal");
    need(norm(c.routing.ap_boresight) > 0.0, "AP boresight must be non-zero");
    need(c.routing.max_route_length >= 0, "max_route_length must be non-negative");

    const auto &q = c.quadrature;
    need(q.step_deg > 0.0, "quadrature step must be positive");
    if (q.step_deg > 0.0)
    {
        const double span = q.domain == "full_sphere" ? 180.0 : 90.0;
        const double cells = span / q.step_deg;
        need(std::abs(cells - std::round(cells)) < 1e-9 * cells, "quadrature step must divide the polar span");
    }
    need(q.domain == "hemisphere" || q.domain == "full_sphere", "quadrature.domain must be hemisphere or full_sphere");
    need(q.tolerance > 0.0, "quadrature tolerance must be positive");
    need(q.normalizer_resolution >= 0, "normalizer resolution must be non-negative");

    const auto &s = c.sampling;
    need(s.x_hi >= s.x_lo && s.y_hi >= s.y_lo, "sampling bounds are inverted");
    need(c.room.contains({s.x_lo, s.y_lo, s.z}) && c.room.contains({s.x_hi, s.y_hi, s.z}),
         "sampling bounds must lie inside the room");
    need(std::abs(s.elevation_deg) < 90.0, "UE elevation must lie in (-90, 90) degrees");

    const auto &e = c.experiment;
    need(e.iterations >= 1 && e.figure_iterations >= 1, "iterations must be at least 1");
    need(e.workers >= 0, "workers must be non-negative");
    need(e.ring_radius_m >= 0.0, "ring radius must be non-negative");
    need(e.azimuth_step_deg > 0.0, "azimuth step must be positive");
    need(!e.snr_db.empty() && std::is_sorted(e.snr_db.begin(), e.snr_db.end()) &&
             std::adjacent_find(e.snr_db.begin(), e.snr_db.end()) == e.snr_db.end(),
         "snr grid must be strictly ascending");
    need(!e.n_elements.empty(), "element-count grid must not be empty");
    for (int n : e.n_elements)
    {
        const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
        need(n >= 1 && side * side == n, "element count " + std::to_string(n) + " is not a perfect square");
    }
    need(!e.panel_sets.empty(), "at least one panel set is required");
    for (const auto &[label, set] : e.panel_sets)
    {
        need(!set.empty(), "panel set " + std::to_string(label) + " is empty");
        for (int id : set)
            need(ids.count(id) == 1, "panel set " + std::to_string(label) + " references unknown panel " +
                                         std::to_string(id));
    }
    return v;
}

const LerisPanel &Scenario::panel(int id) const
{
    for (const auto &p : panels)
        if (p.id == id)
            return p;
    throw ArgumentError("unknown panel id " + std::to_string(id));
}

std::vector<const Vcsel *> Scenario::vcsels_of(int panel_id) const
{
    std::vector<const Vcsel *> out;
    for (const auto &v : vcsels)
        if (v.panel_id == panel_id)
            out.push_back(&v);
    return out;
}

FeasibilityLimits Scenario::limits() const { return {mmwave.ue_directivity_rad, pd.fov_half_angle_rad}; }

Scenario build_scenario(const ScenarioConfig &config)
{
    auto violations = validate_config(config);
    if (!violations.empty())
    {
        std::string msg = "invalid scenario configuration:";
        for (const auto &s : violations)
            msg += "\n  - " + s;
        throw ValidationError(msg, violations);
    }

    Scenario sc;
    sc.config = config;
    sc.room = config.room;

    const auto &o = config.optical;
    sc.pd.area_m2 = o.pd_area_m2;
    sc.pd.fov_half_angle_rad = deg_to_rad(o.pd_fov_deg);
    sc.pd.responsivity_a_per_w = o.responsivity_a_per_w;
    sc.pd.bandwidth_hz = o.bandwidth_hz;
    sc.noise.noise_figure = db_to_linear(o.noise_figure_db);
    sc.noise.rin_per_hz = db_to_linear(o.rin_db_per_hz);
    sc.noise.load_ohms = o.load_ohms;
    sc.noise.temperature_k = o.temperature_k;
    sc.noise.fixed_variance = o.noise_variance;
    sc.noise_mode = parse_noise_mode(o.noise_mode);
    sc.ranging = parse_ranging_method(o.ranging);

    const auto &m = config.mmwave;
    sc.mmwave.wavelength_m = m.wavelength_m;
    sc.mmwave.tx_power_w = m.tx_power_w;
    sc.mmwave.tx_gain = db_to_linear(m.tx_gain_db);
    sc.mmwave.noise_power = db_to_linear(m.noise_power_db);
    sc.mmwave.path_loss_exponent = m.path_loss_exponent;
    sc.mmwave.ref_distance_m = m.ref_distance_m;
    sc.mmwave.ue_directivity_rad = deg_to_rad(m.ue_directivity_deg);
    sc.rate_formula = m.rate_formula == "literal" ? RateFormula::literal : RateFormula::physical;
    sc.delay_variant =
        config.array.delay_variant == "symmetric" ? PathDelayVariant::symmetric : PathDelayVariant::literal;

    sc.grid.step_deg = config.quadrature.step_deg;
    sc.grid.domain =
        config.quadrature.domain == "full_sphere" ? IntegrationDomain::full_sphere : IntegrationDomain::hemisphere;
    sc.grid.tolerance = config.quadrature.tolerance;

    sc.ap = {NodeKind::access_point, ap_node_id, config.routing.ap_position, normalized(config.routing.ap_boresight)};

    const auto &l = config.layout;
    sc.panel_half_sector_rad = deg_to_rad(l.panel_sector_deg) / 2.0;
    sc.panel_half_elevation_rad = deg_to_rad(l.elevation_span_deg) / 2.0;
    const double side = config.array.element_side_m.value_or(m.wavelength_m / 2.0);
    const double ring_w = l.ring_side_m.value_or(config.array.m_rows * side);
    const double ring_h = l.ring_side_m.value_or(config.array.n_cols * side);

    const VcselMode mode_a(o.transmit_power_w, o.beam_waist_m, o.wavelength_m);
    const VcselMode mode_b(o.mode_b_power_w.value_or(o.transmit_power_w), o.mode_b_waist_m.value_or(2.0 * o.beam_waist_m),
                           o.wavelength_m);

    for (const auto &pl : config.panels)
    {
        LerisPanel p;
        p.id = pl.id;
        p.center = pl.center;
        p.normal = normalized(pl.normal.value_or(inward_normal(config.room, pl.center)));
        p.m_rows = config.array.m_rows;
        p.n_cols = config.array.n_cols;
        p.element_side_m = side;
        p.efficiency = config.array.efficiency;
        const Frame f = p.frame();
        const int k_total = l.vcsels_per_panel;
        const double perimeter = 2.0 * (ring_w + ring_h);
        for (int k = 0; k < k_total; ++k)
        {
            const auto [lx, ly] = perimeter_point(ring_w, ring_h, (k + 0.5) * perimeter / k_total);
            const double lo = -sc.panel_half_sector_rad + k * deg_to_rad(l.vcsel_sector_deg);
            const AzimuthSector sector{lo, lo + deg_to_rad(l.vcsel_sector_deg)};
            const double elev = deg_to_rad(l.elevation_levels_deg[static_cast<std::size_t>(k) % l.elevation_levels_deg.size()]);
            const double az = 0.5 * (sector.lo + sector.hi);
            const Vec3 bore_local{std::cos(elev) * std::sin(az), std::sin(elev), std::cos(elev) * std::cos(az)};
            Vcsel v{p.id * 1000 + k, p.id, f.to_world({lx, ly, 0.0}), f.direction_to_world(bore_local), sector, elev,
                    mode_a, mode_b};
            p.vcsel_ids.push_back(v.id);
            sc.vcsels.push_back(v);
        }
        sc.panels.push_back(std::move(p));
    }
    return sc;
}

Scenario with_array_size(const Scenario &base, int m_rows, int n_cols)
{
    Scenario sc = base;
    for (auto &p : sc.panels)
    {
        p.m_rows = m_rows;
        p.n_cols = n_cols;
        p.validate();
    }
    sc.config.array.m_rows = m_rows;
    sc.config.array.n_cols = n_cols;
    return sc;
}

namespace
{

VcselView view_in(const Frame &f, const Vec3 &origin, const Vec3 &ue_position)
{
    const Vec3 d = f.direction_to_local(ue_position - origin);
    VcselView out;
    out.distance = norm(d);
    // local x is horizontal along the wall, local y is up
    out.azimuth = std::atan2(d.x, d.z);
    out.elevation = std::atan2(d.y, std::hypot(d.x, d.z));
    return out;
}

} // namespace

VcselView view_from(const Scenario &scenario, const Vcsel &vcsel, const Vec3 &ue_position)
{
    const LerisPanel &p = scenario.panel(vcsel.panel_id);
    return view_in(Frame(vcsel.position, p.normal), vcsel.position, ue_position);
}

VcselView view_from_panel(const LerisPanel &panel, const Vec3 &ue_position)
{
    return view_in(panel.frame(), panel.center, ue_position);
}

bool within_panel_footprint(const Scenario &scenario, const VcselView &view)
{
    return std::abs(view.azimuth) <= scenario.panel_half_sector_rad &&
           std::abs(view.elevation) <= scenario.panel_half_elevation_rad;
}

bool owns_azimuth(const Scenario &scenario, const Vcsel &vcsel, const VcselView &panel_view)
{
    const bool last = std::abs(vcsel.azimuth_sector.hi - scenario.panel_half_sector_rad) < 1e-12;
    return vcsel.azimuth_sector.contains(panel_view.azimuth, last);
}

Vec3 ue_normal(double azimuth_rad, double elevation_rad)
{
    return {std::cos(elevation_rad) * std::cos(azimuth_rad), std::cos(elevation_rad) * std::sin(azimuth_rad),
            std::sin(elevation_rad)};
}

} // namespace leris
