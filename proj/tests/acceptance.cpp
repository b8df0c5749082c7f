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


// Acceptance run: one PASS/FAIL line per criterion.

#include "leris/cli.hpp"
#include "leris/experiments.hpp"
#include "leris/localization.hpp"
#include "leris/mmwave_channel.hpp"
#include "leris/pattern_kernels.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace leris;

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, bool pass, const std::string &detail)
{
    std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    failures += pass ? 0 : 1;
}

std::string fmt(const char *f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

const SweepRow *find_row(const SweepResult &r, double axis, int L)
{
    for (const auto &row : r.rows)
        if (row.axis == axis && row.panels == L)
            return &row;
    return nullptr;
}

void criterion_1()
{
    const Scenario sc = build_scenario(ScenarioConfig{});
    const auto t0 = Clock::now();
    const RoundTripStats st = run_localization_round_trip(sc, 1000, 20260419, 0);
    const double t = seconds_since(t0);
    const double frac = static_cast<double>(st.exact) / static_cast<double>(st.draws);
    const bool pass = frac >= 0.999 && st.silently_wrong == 0 && t < 10.0;
    std::string kinds;
    for (const auto &[k, n] : st.flagged_by_kind)
        kinds += std::string(" ") + to_string(k) + "=" + std::to_string(n);
    report(1, pass,
           fmt("exact %.1f%%, silently wrong %.0f, runtime %.2f s; flagged:", 100.0 * frac,
               static_cast<double>(st.silently_wrong), t) +
               kinds);
}

void criterion_2()
{
    ScenarioConfig c;
    c.experiment.panel_sets = {{4, {1, 2, 3, 4}}};
    const auto t0 = Clock::now();
    const SweepResult r = run_error_vs_azimuth(build_scenario(c));
    const double t = seconds_since(t0);
    double worst = 0.0;
    int missing = 0;
    for (const auto &row : r.rows)
    {
        if (row.value.n != 1 || !std::isfinite(row.value.mean))
            ++missing;
        else
            worst = std::max(worst, row.value.mean);
    }
    const bool pass = r.rows.size() == 360 && missing == 0 && worst <= 2.0 && t < 60.0;
    report(2, pass, fmt("max dd %.4g mm over %.0f azimuths, %.0f", worst, static_cast<double>(r.rows.size()),
                        static_cast<double>(missing)) +
                        fmt(" without a value, runtime %.2f s", t));
}

void criterion_3()
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    int negative = 0;
    for (int i = 0; i < 100000; ++i)
    {
        const double d = 0.05 + 15.0 * u(rng);
        const double z = 1e-5 * std::pow(10.0, 3.0 * u(rng));
        const double alpha = std::pow(10.0, 1.0 + 5.0 * u(rng));
        const double dd = ranging_error(d, z, alpha);
        negative += dd < 0.0 ? 1 : 0;
        // d_hat from the estimate formula in extended precision
        const long double D = d, Z = z, A = alpha;
        const long double d_hat = std::sqrt((A * D * D - Z * Z) / (A + 1.0L));
        const long double diff = D - d_hat;
        worst = std::max(worst, static_cast<double>(std::abs((static_cast<long double>(dd) - diff) / diff)));
    }
    report(3, worst <= 1e-12 && negative == 0,
           fmt("max relative mismatch %.3g, negative errors %.0f", worst, static_cast<double>(negative)));
}

void criterion_4()
{
    PatternContext ctx;
    ctx.wavenumber = 2.0 * pi / 0.01;
    ctx.tx = {1.5, -2.0, 4.0};
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_steer = 0.0, worst_ratio = 0.0;
    for (int side : {2, 8, 50})
    {
        LerisPanel p;
        p.m_rows = p.n_cols = side;
        const double mn = side * side;
        for (int t = 0; t < 20; ++t)
        {
            const double th = 0.5 * pi * u(rng), ph = 2.0 * pi * u(rng);
            const PhaseProfile prof = steering_phase_profile(p, th, ph, ctx);
            worst_steer = std::max(worst_steer, rel(std::abs(array_factor(p, prof, th, ph, ctx)), mn));
            PhaseProfile random = zero_profile(p);
            for (double &v : random.phase)
                v = 2.0 * pi * u(rng);
            for (int k = 0; k < 10; ++k)
                worst_ratio = std::max(
                    worst_ratio, std::abs(array_factor(p, random, 0.5 * pi * u(rng), 2.0 * pi * u(rng), ctx)) / mn);
        }
    }
    report(4, worst_steer <= 1e-9 && worst_ratio <= 1.0,
           fmt("steered max relative deviation %.3g, random max |F|/MN %.4f", worst_steer, worst_ratio));
}

void criterion_5()
{
    LerisPanel p;
    p.m_rows = p.n_cols = 8;
    p.efficiency = 0.9;
    PatternContext ctx;
    ctx.wavenumber = 2.0 * pi / 0.01;
    ctx.tx = {0.8, 1.3, 2.5};
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
    // the gain's denominator uses the library grid; the check integrates G
    // on an independent midpoint grid with a different step
    const int nt = 300, np = 1200;
    const double ht = 0.5 * pi / nt, hp = 2.0 * pi / np;
    double worst = 0.0;
    for (int t = 0; t < 20; ++t)
    {
        PhaseProfile prof = zero_profile(p);
        for (double &v : prof.phase)
            v = u(rng);
        const double den = directional_gain(p, prof, 0.0, 0.0, ctx).denominator;
        double acc = 0.0;
        for (int i = 0; i < nt; ++i)
        {
            const double th = (i + 0.5) * ht;
            double ring = 0.0;
            for (int j = 0; j < np; ++j)
                ring += std::norm(array_factor(p, prof, th, (j + 0.5) * hp, ctx));
            acc += ring * std::sin(th);
        }
        const double integral = p.efficiency * 4.0 * pi / den * acc * ht * hp;
        worst = std::max(worst, rel(integral, 4.0 * pi * p.efficiency));
    }
    report(5, worst <= 0.01, fmt("max relative deviation from 4 pi eta %.3g over 20 profiles", worst));
}

void criterion_6()
{
    LerisPanel p;
    const MmWaveParams par;
    // extended-precision hand values
    const double g = rel(max_gain(p), 2500.0);
    const double a = rel(effective_aperture(p, par.wavelength_m), 0.019894367886486917);
    const double ag = rel(effective_aperture(p, par.wavelength_m) * max_gain(p), 49.735919716217292);
    const double c0 = rel(reference_loss(par), 6.3325739776461107e-7);
    const double worst = std::max({g, a, ag, c0});
    report(6, worst <= 1e-9, fmt("max relative deviation %.3g", worst));
}

void criterion_7()
{
    const Scenario sc = build_scenario(ScenarioConfig{});
    const auto t0 = Clock::now();
    const SweepResult r = run_rate_vs_snr(sc, RunOptions{5000, 0});
    const double t = seconds_since(t0);
    const auto &snrs = sc.config.experiment.snr_db;
    bool increasing = true, ordered = true, bounded = true;
    for (std::size_t i = 0; i < snrs.size(); ++i)
    {
        const SweepRow *r1 = find_row(r, snrs[i], 1), *r2 = find_row(r, snrs[i], 2), *r4 = find_row(r, snrs[i], 4);
        if (!r1 || !r2 || !r4)
        {
            ordered = false;
            continue;
        }
        ordered = ordered && r4->value.mean > r2->value.mean && r2->value.mean > r1->value.mean;
        for (const SweepRow *x : {r1, r2, r4})
            bounded = bounded && x->value.mean >= 0.0 && x->value.mean <= 16.0;
        if (i > 0)
            for (int L : {1, 2, 4})
                increasing = increasing && find_row(r, snrs[i], L)->value.mean > find_row(r, snrs[i - 1], L)->value.mean;
    }
    const SweepRow *hi1 = find_row(r, 130.0, 1), *hi4 = find_row(r, 130.0, 4);
    report(7, increasing && ordered && bounded && t < 1800.0,
           std::string("increasing ") + (increasing ? "yes" : "no") + ", L ordering " + (ordered ? "yes" : "no") +
               ", within [0,16] " + (bounded ? "yes" : "no") +
               fmt("; R(130 dB) L1 %.3f L4 %.3f; runtime %.1f s", hi1 ? hi1->value.mean : NAN,
                   hi4 ? hi4->value.mean : NAN, t));
}

void criterion_8()
{
    const Scenario sc = build_scenario(ScenarioConfig{});
    const auto t0 = Clock::now();
    const SweepResult r = run_rate_vs_elements(sc, RunOptions{5000, 0});
    const double t = seconds_since(t0);
    const auto &ns = sc.config.experiment.n_elements;
    bool monotone = true, ordered = true;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i)
    {
        const double n = ns[i];
        const SweepRow *r1 = find_row(r, n, 1), *r2 = find_row(r, n, 2), *r4 = find_row(r, n, 4);
        if (!r1 || !r2 || !r4)
        {
            ordered = false;
            continue;
        }
        ordered = ordered && r4->value.mean > r2->value.mean && r2->value.mean > r1->value.mean;
        best_ratio = std::max(best_ratio, r4->value.mean / r1->value.mean);
        if (i > 0)
            for (int L : {1, 2, 4})
                monotone = monotone && find_row(r, n, L)->value.mean >= find_row(r, ns[i - 1], L)->value.mean;
    }
    report(8, monotone && ordered && best_ratio >= 2.0,
           std::string("non-decreasing ") + (monotone ? "yes" : "no") + ", L ordering " + (ordered ? "yes" : "no") +
               fmt("; max R(L4)/R(L1) %.3f; runtime %.1f s", best_ratio, t));
}

std::string slurp(const std::filesystem::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int cli(const std::vector<std::string> &args)
{
    std::vector<const char *> argv{"leris"};
    for (const auto &a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

void criterion_9()
{
    bool same = true;
    std::string detail;
    for (const std::string fig : {"fig2", "fig3", "fig4"})
    {
        std::string csv[2];
        int k = 0;
        for (const std::string workers : {"1", "4"})
        {
            const std::string dir = "acceptance_" + fig + "_w" + workers;
            const int code = cli({"figure", fig, "--iterations", "100", "--workers", workers, "-o", dir});
            same = same && code == 0;
            csv[k++] = slurp(std::filesystem::path(dir) / (fig + ".csv"));
        }
        const bool eq = !csv[0].empty() && csv[0] == csv[1];
        same = same && eq;
        detail += fig + (eq ? " identical " : " differs ");
    }
    report(9, same, detail + "(workers 1 vs 4)");
}

} // namespace

int main()
{
    const std::vector<std::function<void()>> criteria{criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                                      criterion_6, criterion_7, criterion_8, criterion_9};
    for (const auto &c : criteria)
    {
        try
        {
            c();
        }
        catch (const std::exception &e)
        {
            std::printf("criterion raised: %s\n", e.what());
            ++failures;
        }
    }
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
