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

#include "leris/cli.hpp"
#include "leris/experiments.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace leris
{
namespace
{

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Options
{
    std::string command;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> iterations;
    int workers = 0;
    std::string out_dir = "leris_out";
    std::optional<std::string> noise_mode;
    std::optional<double> quadrature_deg;
    std::optional<int> max_route_length;
    std::vector<double> ue{4.0, 6.0, 1.5};
    double azimuth_deg = 180.0;
    std::vector<int> panels;
    std::string figure;
};

void add_common(CLI::App *sub, Options &o)
{
    sub->add_option("-c,--config", o.config_path, "Scenario JSON (defaults when omitted)");
    sub->add_option("--seed", o.seed, "RNG seed override");
    sub->add_option("--iterations", o.iterations, "Monte Carlo draws per grid point")->check(CLI::PositiveNumber);
    sub->add_option("--workers", o.workers, "OpenMP threads (0: default)")->check(CLI::NonNegativeNumber);
    sub->add_option("-o,--out", o.out_dir, "Output directory for CSV and manifest.json");
    sub->add_option("--noise-mode", o.noise_mode, "off|literal|fixed|stochastic")
        ->check(CLI::IsMember({"off", "literal", "fixed", "stochastic"}));
    sub->add_option("--quadrature-deg", o.quadrature_deg, "Gain quadrature step in degrees")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-route-length", o.max_route_length, "Longest route considered (0: no limit)")
        ->check(CLI::NonNegativeNumber);
}

void add_pose(CLI::App *sub, Options &o)
{
    sub->add_option("--ue", o.ue, "UE position x,y,z in metres")->delimiter(',')->expected(3);
    sub->add_option("--azimuth", o.azimuth_deg, "UE facing azimuth in degrees");
    sub->add_option("--panels", o.panels, "Active panel ids (default: all)")->delimiter(',');
}

ScenarioConfig effective_config(const Options &o)
{
    ScenarioConfig c = o.config_path.empty() ? ScenarioConfig{} : load_config(o.config_path);
    if (o.seed)
        c.experiment.seed = *o.seed;
    if (o.iterations)
        c.experiment.figure_iterations = *o.iterations;
    if (o.noise_mode)
        c.optical.noise_mode = *o.noise_mode;
    if (o.quadrature_deg)
        c.quadrature.step_deg = *o.quadrature_deg;
    if (o.max_route_length)
        c.routing.max_route_length = *o.max_route_length;
    return c;
}

std::string fmt(double v) { return format_number(v); }
std::string fmt(const Vec3 &v) { return "(" + fmt(v.x) + ", " + fmt(v.y) + ", " + fmt(v.z) + ")"; }
std::string db(double v) { return v > 0.0 ? fmt(10.0 * std::log10(v)) : "-inf"; }

UePose pose_from(const Scenario &sc, const Options &o)
{
    UePose p;
    p.position = {o.ue[0], o.ue[1], o.ue[2]};
    if (!sc.room.contains(p.position))
        throw ValidationError("UE position " + fmt(p.position) + " lies outside the room",
                              {"UE position outside the room"});
    p.azimuth_rad = deg_to_rad(o.azimuth_deg);
    p.normal = ue_normal(p.azimuth_rad, deg_to_rad(sc.config.sampling.elevation_deg));
    return p;
}

std::vector<int> panel_ids(const Scenario &sc, const Options &o)
{
    if (o.panels.empty())
    {
        std::vector<int> all;
        for (const auto &p : sc.panels)
            all.push_back(p.id);
        return all;
    }
    for (int id : o.panels)
        sc.panel(id);
    return o.panels;
}

LocalizationEstimate localize_or_throw(const Scenario &sc, const std::vector<int> &ids, const UePose &pose)
{
    std::mt19937_64 rng(substream_seed(sc.config.experiment.seed, 0));
    const auto loc = localize_pose(sc, ids, pose, &rng);
    if (!loc.estimate)
        throw Error(*loc.failure, loc.message, {{"observed_anchors", static_cast<double>(loc.observed)}});
    return *loc.estimate;
}

void cmd_localize(const Scenario &sc, const Options &o, std::ostream &out, json &manifest)
{
    const UePose pose = pose_from(sc, o);
    const auto ids = panel_ids(sc, o);
    const auto est = localize_or_throw(sc, ids, pose);
    const double pos_err = distance(est.position, pose.position);
    const double ori_err = angle_between(est.orientation, pose.normal);
    out << "true position:        " << fmt(pose.position) << "\n"
        << "true orientation:     " << fmt(pose.normal) << "\n"
        << "serving anchors:      " << est.anchor_ids[0] << " " << est.anchor_ids[1] << " " << est.anchor_ids[2]
        << "\n"
        << "anchor ranges (m):    " << fmt(est.per_link_distances[0]) << " " << fmt(est.per_link_distances[1]) << " "
        << fmt(est.per_link_distances[2]) << "\n"
        << "usable anchors:       " << est.usable_anchors << "\n"
        << "estimated position:   " << fmt(est.position) << "\n"
        << "estimated orientation:" << " " << fmt(est.orientation) << "\n"
        << "position error (mm):  " << fmt(pos_err * 1e3) << "\n"
        << "orientation error (deg): " << fmt(rad_to_deg(ori_err)) << "\n"
        << "condition number:     " << fmt(est.condition_number) << "\n";
    manifest["result"] = {{"position_error_mm", pos_err * 1e3},
                          {"orientation_error_deg", rad_to_deg(ori_err)},
                          {"anchors", est.anchor_ids},
                          {"condition_number", est.condition_number}};
}

void cmd_link_budget(const Scenario &sc, const Options &o, std::ostream &out, json &manifest)
{
    const UePose pose = pose_from(sc, o);
    const auto ids = panel_ids(sc, o);
    const auto est = localize_or_throw(sc, ids, pose);
    const auto panels = active_panels(sc, ids);
    const FinalGainFn gain = quadrature_final_gain(sc.grid, sc.delay_variant, sc.mmwave.wavenumber());
    const LinkBudget b = route_for(sc, panels, pose, est.position, gain);

    out << "estimated position:   " << fmt(est.position) << "\n";
    if (!b.feasible)
    {
        out << "route:                none feasible\n"
            << "R (bits/s/Hz):        0\n";
        manifest["result"] = {{"feasible", false}, {"spectral_efficiency", 0.0}};
        return;
    }
    std::string route = "AP";
    for (int id : b.route.panel_ids)
        route += " -> " + std::to_string(id);
    route += " -> UE";
    std::string chi;
    for (bool f : b.route.feasibility)
        chi += f ? "1 " : "0 ";
    out << "route:                " << route << "\n"
        << "segment lengths (m):  ";
    for (double d : b.route.segment_lengths)
        out << fmt(d) << " ";
    out << "\n"
        << "segment feasibility:  " << chi << "\n"
        << "cascaded gain (dB):   " << db(b.cascaded_gain) << "\n"
        << "final aperture (dBm2):" << " " << db(b.aperture) << "\n"
        << "final panel gain (dB):" << " " << db(b.final_gain) << "\n"
        << "UE gain G_r:          " << fmt(b.ue_gain) << " (" << db(b.ue_gain) << " dB)\n"
        << "route gain (dB):      " << db(b.route_gain) << "\n"
        << "path loss (dB):       " << db(b.path_loss) << "\n"
        << "R (bits/s/Hz):        " << fmt(b.spectral_efficiency) << "\n";
    manifest["result"] = {{"feasible", true},
                          {"route", b.route.panel_ids},
                          {"ue_gain", b.ue_gain},
                          {"route_gain", b.route_gain},
                          {"path_loss", b.path_loss},
                          {"spectral_efficiency", b.spectral_efficiency}};
}

void write_text(const fs::path &path, const std::string &text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot write '" + path.string() + "'");
    f << text;
    if (!f)
        throw IoError("write to '" + path.string() + "' failed");
}

void cmd_figure(const Scenario &sc, const Options &o, std::ostream &out, json &manifest)
{
    RunOptions ro;
    ro.workers = o.workers > 0 ? o.workers : sc.config.experiment.workers;
    SweepResult r;
    if (o.figure == "fig2")
        r = run_error_vs_azimuth(sc, ro);
    else if (o.figure == "fig3")
        r = run_rate_vs_snr(sc, ro);
    else
        r = run_rate_vs_elements(sc, ro);
    const fs::path csv = fs::path(o.out_dir) / (o.figure + ".csv");
    write_text(csv, to_csv(r));
    const json summary = sweep_summary(r);
    manifest["iterations"] = r.iterations;
    manifest["counters"] = summary["counters"];
    manifest["standard_errors"] = summary["standard_errors"];
    for (const auto &w : r.warnings)
        manifest["warnings"].push_back(w);
    for (const auto &[stage, s] : r.timings_s)
        manifest["timings_s"][stage] = s;
    manifest["outputs"].push_back(csv.filename().string());
    out << "wrote " << csv.string() << " (" << r.rows.size() << " rows)\n";
}

json error_json(const Error &e)
{
    json j{{"error", to_string(e.kind())}, {"message", e.what()}, {"exit_code", exit_code(e.kind())}};
    json diag = json::object();
    for (const auto &[k, v] : e.diagnostics())
        diag[k] = std::isfinite(v) ? json(v) : json(nullptr);
    j["diagnostics"] = diag;
    if (const auto *ve = dynamic_cast<const ValidationError *>(&e))
        j["violations"] = ve->violations;
    return j;
}

} // namespace

int exit_code(ErrorKind kind) noexcept
{
    switch (kind)
    {
    case ErrorKind::argument: return 2;
    case ErrorKind::degenerate_geometry: return 3;
    case ErrorKind::infeasible_ratio: return 4;
    case ErrorKind::inconsistent_ranges: return 5;
    case ErrorKind::ambiguous_solution: return 6;
    case ErrorKind::ill_conditioned: return 7;
    case ErrorKind::insufficient_anchors: return 8;
    case ErrorKind::noise_dominated: return 9;
    case ErrorKind::quadrature: return 10;
    case ErrorKind::configuration: return 11;
    case ErrorKind::validation: return 12;
    case ErrorKind::io: return 13;
    case ErrorKind::unknown: return 1;
    }
    return 1;
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    Options o;
    CLI::App app{"LeRIS localization and mmWave link simulator", "leris"};
    app.set_version_flag("--version", tool_version);
    app.require_subcommand(1);

    auto *loc = app.add_subcommand("localize", "Localize one UE pose from VCSEL observations");
    add_common(loc, o);
    add_pose(loc, o);
    auto *lb = app.add_subcommand("link-budget", "Best route and rate for one UE pose");
    add_common(lb, o);
    add_pose(lb, o);
    auto *fig = app.add_subcommand("figure", "Run a figure sweep and write <figure>.csv");
    add_common(fig, o);
    fig->add_option("which", o.figure, "fig2|fig3|fig4")->required()->check(CLI::IsMember({"fig2", "fig3", "fig4"}));
    auto *cfg = app.add_subcommand("config", "Print the effective configuration as JSON");
    add_common(cfg, o);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &)
    {
        out << app.help();
        return 0;
    }
    catch (const CLI::CallForVersion &)
    {
        out << tool_version << "\n";
        return 0;
    }
    catch (const CLI::ParseError &e)
    {
        const ArgumentError ae(e.what());
        err << error_json(ae).dump() << "\n";
        return exit_code(ErrorKind::argument);
    }
    for (auto *s : {loc, lb, fig, cfg})
        if (s->parsed())
            o.command = s->get_name();

    const auto t0 = Clock::now();
    json manifest{{"schema", manifest_schema}, {"tool_version", tool_version}, {"command", o.command},
                  {"workers", o.workers}, {"warnings", json::array()}, {"timings_s", json::object()},
                  {"outputs", json::array()}};
    if (!o.figure.empty())
        manifest["figure"] = o.figure;

    int code = 0;
    try
    {
        const ScenarioConfig config = effective_config(o);
        manifest["config_fingerprint"] = config_fingerprint(config);
        manifest["seed"] = config.experiment.seed;
        if (o.command == "config")
        {
            // validate so that a dump is always loadable
            build_scenario(config);
            out << config_to_json(config).dump(2) << "\n";
        }
        else
        {
            const Scenario sc = build_scenario(config);
            try
            {
                fs::create_directories(o.out_dir);
            }
            catch (const fs::filesystem_error &e)
            {
                throw IoError(std::string("cannot create output directory: ") + e.what());
            }
            if (o.command == "localize")
                cmd_localize(sc, o, out, manifest);
            else if (o.command == "link-budget")
                cmd_link_budget(sc, o, out, manifest);
            else
                cmd_figure(sc, o, out, manifest);
        }
        manifest["status"] = "ok";
    }
    catch (const Error &e)
    {
        code = exit_code(e.kind());
        manifest["status"] = "error";
        manifest["error"] = error_json(e);
        err << error_json(e).dump() << "\n";
    }
    catch (const std::exception &e)
    {
        code = 1;
        const Error wrapped(ErrorKind::unknown, e.what());
        manifest["status"] = "error";
        manifest["error"] = error_json(wrapped);
        err << error_json(wrapped).dump() << "\n";
    }
    manifest["exit_code"] = code;
    manifest["wall_clock_s"] = std::chrono::duration<double>(Clock::now() - t0).count();

    // the manifest accompanies every run, including failed ones
    std::error_code ec;
    fs::create_directories(o.out_dir, ec);
    std::ofstream mf(fs::path(o.out_dir) / "manifest.json");
    if (mf)
        mf << manifest.dump(2) << "\n";
    if (!mf)
    {
        const IoError io("cannot write manifest.json into '" + o.out_dir + "'");
        err << error_json(io).dump() << "\n";
        if (code == 0)
            code = exit_code(ErrorKind::io);
    }
    return code;
}

} // namespace leris
