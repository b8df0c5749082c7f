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

#include "leris/localization.hpp"
#include "leris/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace leris
{
namespace
{

using LD = long double;

struct V3L
{
    LD x = 0, y = 0, z = 0;
};

V3L to_ld(const Vec3 &v) { return {v.x, v.y, v.z}; }
Vec3 to_d(const V3L &v) { return {double(v.x), double(v.y), double(v.z)}; }
V3L sub(const V3L &a, const V3L &b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
V3L add(const V3L &a, const V3L &b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
V3L scale(const V3L &a, LD s) { return {a.x * s, a.y * s, a.z * s}; }
LD dotl(const V3L &a, const V3L &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
V3L crossl(const V3L &a, const V3L &b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
LD norml(const V3L &a) { return std::sqrt(dotl(a, a)); }

LD mode_amplitude(const VcselMode &m, LD area)
{
    const LD w0 = m.beam_waist_m();
    return LD(2) * area * LD(m.transmit_power_w()) / (std::numbers::pi_v<LD> * w0 * w0);
}

// Smallest eigenvalue of the Gram matrix of three unit vectors with pairwise
// dot products a, b, c. Eigenvalues are 1 + mu where mu^3 - p mu - q = 0.
double min_gram_eigenvalue(double a, double b, double c)
{
    const double p = a * a + b * b + c * c;
    if (p < 1e-300)
        return 1.0;
    const double q = 2.0 * a * b * c;
    const double r = std::sqrt(p / 3.0);
    const double arg = std::clamp(q / (2.0 * r * r * r), -1.0, 1.0);
    const double t = std::acos(arg) / 3.0;
    double mu = 2.0 * r * std::cos(t);
    for (int k = 1; k < 3; ++k)
        mu = std::min(mu, 2.0 * r * std::cos(t - 2.0 * pi * k / 3.0));
    return std::max(0.0, 1.0 + mu);
}

bool collinear(const Vec3 &a, const Vec3 &b, const Vec3 &c)
{
    const Vec3 e1 = b - a, e2 = c - a;
    return norm(cross(e1, e2)) <= 1e-12 * std::max(1e-300, norm(e1) * norm(e2));
}

} // namespace

long double mode_ratio_distance(long double p_a, long double p_b, const VcselMode &mode_a, const VcselMode &mode_b,
                                double pd_area)
{
    if (!(p_a > 0.0L) || !(p_b > 0.0L))
        throw ArgumentError("mode powers must be positive");
    const LD za = mode_a.rayleigh_range_m(), zb = mode_b.rayleigh_range_m();
    const LD ba = mode_amplitude(mode_a, pd_area), bb = mode_amplitude(mode_b, pd_area);
    const LD ratio = (p_a / p_b) * (bb / ba);
    const LD num = LD(1) - ratio;
    const LD den = ratio / (za * za) - LD(1) / (zb * zb);
    if (za == zb)
        throw InfeasibleRatioError("mode a and mode b share a Rayleigh range", double(ratio));
    if (num == 0.0L)
        return 0.0L;
    const LD radicand = num / den;
    if (!(radicand >= 0.0L) || !std::isfinite(radicand))
        throw InfeasibleRatioError("mode power ratio maps to no real distance", double(ratio));
    return std::sqrt(radicand);
}

long double known_incidence_distance(long double p_r, const VcselMode &mode, double pd_area, long double cos_incidence)
{
    if (!(p_r > 0.0L))
        throw ArgumentError("received power must be positive");
    if (!(cos_incidence > 0.0L))
        throw ArgumentError("incidence cosine must be positive");
    const LD z = mode.rayleigh_range_m();
    const LD radicand = mode_amplitude(mode, pd_area) * cos_incidence / p_r - LD(1);
    if (radicand < 0.0L)
        throw NoiseDominatedError("received power exceeds the waist power", double(radicand));
    return z * std::sqrt(radicand);
}

TrilaterationResult trilaterate(const std::array<Vec3, 3> &anchors, const std::array<long double, 3> &distances,
                                const Room &room)
{
    for (LD d : distances)
        if (!(d > 0.0L))
            throw ArgumentError("trilateration distances must be positive");

    // translate so that anchor 1 sits at the origin
    const V3L s1 = to_ld(anchors[0]);
    const V3L e2 = sub(to_ld(anchors[1]), s1);
    const V3L e3 = sub(to_ld(anchors[2]), s1);
    const V3L w = crossl(e2, e3);
    const LD wn = norml(w);
    if (!(wn > LD(1e-12) * norml(e2) * norml(e3)))
        throw DegenerateGeometryError("trilateration anchors are collinear");

    const LD d1 = distances[0], d2 = distances[1], d3 = distances[2];
    // 2 e_k . x = |e_k|^2 - (d_k^2 - d_1^2)
    const LD g22 = dotl(e2, e2), g23 = dotl(e2, e3), g33 = dotl(e3, e3);
    const LD r2 = (g22 - (d2 - d1) * (d2 + d1)) / LD(2);
    const LD r3 = (g33 - (d3 - d1) * (d3 + d1)) / LD(2);
    const LD det = g22 * g33 - g23 * g23;
    const LD alpha = (r2 * g33 - r3 * g23) / det;
    const LD beta = (g22 * r3 - g23 * r2) / det;
    const V3L p = add(scale(e2, alpha), scale(e3, beta)); // minimum-norm point on the line
    const V3L axis = scale(w, LD(1) / wn);

    LD disc = d1 * d1 - dotl(p, p);
    if (disc < 0.0L)
    {
        if (disc < -LD(1e-9) * d1 * d1)
            throw InconsistentRangesError("ranges admit no common point", double(disc));
        disc = 0.0L;
    }
    const LD t = std::sqrt(disc);
    const V3L plus = add(s1, add(p, scale(axis, t)));
    const V3L minus = add(s1, sub(p, scale(axis, t)));

    const Vec3 rp = to_d(plus), rm = to_d(minus);
    const bool in_p = room.contains(rp), in_m = room.contains(rm);
    TrilaterationResult out;
    if (t == 0.0L)
    {
        if (!in_p)
            throw InconsistentRangesError("tangent solution lies outside the room", double(disc));
        out.position = rp;
        out.mirror = rp;
    }
    else if (in_p && in_m)
        throw AmbiguousSolutionError("both trilateration roots lie inside the room");
    else if (!in_p && !in_m)
        throw InconsistentRangesError("no trilateration root lies inside the room", double(disc));
    else
    {
        out.position = in_p ? rp : rm;
        out.mirror = in_p ? rm : rp;
    }

    const V3L chosen = in_p ? plus : minus;
    LD worst = 0.0L;
    for (std::size_t i = 0; i < 3; ++i)
        worst = std::max(worst, std::abs(norml(sub(chosen, to_ld(anchors[i]))) - distances[i]));
    out.residual_m = double(worst);
    return out;
}

OrientationSolution orientation_solve(const std::array<Vec3, 3> &unit_dirs, const std::array<long double, 3> &c)
{
    Eigen::Matrix<LD, 3, 3> u;
    Eigen::Matrix<LD, 3, 1> rhs;
    for (int i = 0; i < 3; ++i)
    {
        u(i, 0) = unit_dirs[i].x;
        u(i, 1) = unit_dirs[i].y;
        u(i, 2) = unit_dirs[i].z;
        rhs(i) = c[i];
    }
    const LD det = u.determinant();
    Eigen::JacobiSVD<Eigen::Matrix<LD, 3, 3>> svd(u);
    const auto sv = svd.singularValues();
    const double cond = sv(2) > 0.0L ? double(sv(0) / sv(2)) : std::numeric_limits<double>::infinity();
    if (std::abs(det) < LD(orientation_det_tolerance))
        throw IllConditionedError("anchor direction matrix is singular", double(det), cond);

    const Eigen::Matrix<LD, 3, 1> n = u.fullPivLu().solve(rhs);
    OrientationSolution out;
    out.raw = {double(n(0)), double(n(1)), double(n(2))};
    const LD len = n.norm();
    if (!(len > 0.0L))
        throw DegenerateGeometryError("orientation solution is the zero vector");
    out.normalized = {double(n(0) / len), double(n(1) / len), double(n(2) / len)};
    out.determinant = double(det);
    out.condition_number = cond;
    return out;
}

std::array<int, 3> select_anchor_triplet(std::span<const AnchorCandidate> candidates, std::optional<Vec3> ue_hint,
                                         const Room &room, std::span<const long double> coarse_ranges)
{
    const std::size_t n = candidates.size();
    if (n < 3)
        throw InsufficientAnchorsError("at least three anchors are required", n);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return candidates[a].id < candidates[b].id; });

    if (n == 3)
    {
        const auto &a = candidates[order[0]], &b = candidates[order[1]], &c = candidates[order[2]];
        if (collinear(a.position, b.position, c.position))
            throw DegenerateGeometryError("all anchor triplets are collinear");
        return {a.id, b.id, c.id};
    }

    if (!ue_hint)
    {
        if (coarse_ranges.size() != n)
            throw ArgumentError("triplet selection without a hint needs one coarse range per candidate");
        // widest triangle per panel first, then across panels
        std::map<int, std::vector<std::size_t>> by_panel;
        for (std::size_t i : order)
            by_panel[candidates[i].panel_id].push_back(i);
        auto widest = [&](const std::vector<std::size_t> &idx) {
            double best = 0.0;
            std::array<std::size_t, 3> tri{};
            for (std::size_t i = 0; i < idx.size(); ++i)
                for (std::size_t j = i + 1; j < idx.size(); ++j)
                    for (std::size_t k = j + 1; k < idx.size(); ++k)
                    {
                        const Vec3 &a = candidates[idx[i]].position;
                        const double area =
                            norm(cross(candidates[idx[j]].position - a, candidates[idx[k]].position - a));
                        if (area > best)
                        {
                            best = area;
                            tri = {idx[i], idx[j], idx[k]};
                        }
                    }
            return std::pair{best, tri};
        };
        for (const auto &[panel, idx] : by_panel)
        {
            if (idx.size() < 3)
                continue;
            const auto [area, tri] = widest(idx);
            if (!(area > 0.0))
                continue;
            try
            {
                ue_hint = trilaterate({candidates[tri[0]].position, candidates[tri[1]].position,
                                       candidates[tri[2]].position},
                                      {coarse_ranges[tri[0]], coarse_ranges[tri[1]], coarse_ranges[tri[2]]}, room)
                              .position;
                break;
            }
            catch (const Error &)
            {
            }
        }
        if (!ue_hint)
        {
            const auto [area, tri] = widest(order);
            if (!(area > 0.0))
                throw DegenerateGeometryError("all anchor triplets are collinear");
            ue_hint = trilaterate({candidates[tri[0]].position, candidates[tri[1]].position,
                                   candidates[tri[2]].position},
                                  {coarse_ranges[tri[0]], coarse_ranges[tri[1]], coarse_ranges[tri[2]]}, room)
                          .position;
        }
    }

    const Vec3 hint = *ue_hint;
    std::vector<Vec3> dirs(n);
    for (std::size_t i = 0; i < n; ++i)
        dirs[i] = unit_from_to(hint, candidates[order[i]].position);

    double best = -1.0;
    double best_cube = -1.0;
    std::array<std::size_t, 3> pick{};
    bool any_noncollinear = false;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
        {
            const double a = dot(dirs[i], dirs[j]);
            for (std::size_t k = j + 1; k < n; ++k)
            {
                const double b = dot(dirs[i], dirs[k]);
                const double c = dot(dirs[j], dirs[k]);
                // lambda_min^3 <= det(Gram): cheap bound before the eigen solve
                const double gram_det = 1.0 + 2.0 * a * b * c - a * a - b * b - c * c;
                if (gram_det <= best_cube)
                    continue;
                const Vec3 &si = candidates[order[i]].position;
                const Vec3 &sj = candidates[order[j]].position;
                const Vec3 &sk = candidates[order[k]].position;
                const Vec3 w = cross(sj - si, sk - si);
                const double wn = norm(w);
                if (wn <= 1e-12 * norm(sj - si) * norm(sk - si))
                    continue;
                any_noncollinear = true;
                const double lam = min_gram_eigenvalue(a, b, c);
                if (lam <= best)
                    continue;
                const Vec3 wh = w / wn;
                const Vec3 mirror = hint - wh * (2.0 * dot(hint - si, wh));
                if (room.contains(mirror))
                    continue;
                best = lam;
                best_cube = lam * lam * lam;
                pick = {i, j, k};
            }
        }
    if (best < 0.0)
    {
        if (!any_noncollinear)
        {
            // the determinant bound may have skipped everything; recheck plainly
            for (std::size_t i = 0; i < n && !any_noncollinear; ++i)
                for (std::size_t j = i + 1; j < n && !any_noncollinear; ++j)
                    for (std::size_t k = j + 1; k < n && !any_noncollinear; ++k)
                        any_noncollinear = !collinear(candidates[order[i]].position, candidates[order[j]].position,
                                                      candidates[order[k]].position);
            if (!any_noncollinear)
                throw DegenerateGeometryError("all anchor triplets are collinear");
        }
        throw AmbiguousSolutionError("every non-collinear triplet leaves its mirror root inside the room");
    }
    return {candidates[order[pick[0]]].id, candidates[order[pick[1]]].id, candidates[order[pick[2]]].id};
}

LocalizationEstimate solve_pose(std::span<const RangedAnchor> anchors, double pd_area, const Room &room,
                                std::optional<Vec3> ue_hint)
{
    if (anchors.size() < 3)
        throw InsufficientAnchorsError("at least three ranged anchors are required", anchors.size());

    std::vector<AnchorCandidate> cands;
    std::vector<long double> ranges;
    cands.reserve(anchors.size());
    for (const auto &a : anchors)
    {
        cands.push_back({a.vcsel_id, a.position, double(a.power_a), a.panel_id});
        ranges.push_back(a.distance);
    }
    const auto ids = select_anchor_triplet(cands, ue_hint, room, ranges);

    std::array<const RangedAnchor *, 3> tri{};
    for (int k = 0; k < 3; ++k)
        tri[k] = &*std::find_if(anchors.begin(), anchors.end(), [&](const RangedAnchor &a) { return a.vcsel_id == ids[k]; });

    const auto tl = trilaterate({tri[0]->position, tri[1]->position, tri[2]->position},
                                {tri[0]->distance, tri[1]->distance, tri[2]->distance}, room);

    std::array<Vec3, 3> dirs{};
    std::array<long double, 3> c{};
    for (int k = 0; k < 3; ++k)
    {
        dirs[k] = unit_from_to(tl.position, tri[k]->position);
        const LD range = norml(sub(to_ld(tri[k]->position), to_ld(tl.position)));
        c[k] = tri[k]->power_a / mode_coefficient<LD>(*tri[k]->mode_a, LD(pd_area), range);
    }
    const auto orient = orientation_solve(dirs, c);

    LocalizationEstimate est;
    est.position = tl.position;
    est.orientation = orient.normalized;
    est.orientation_raw = orient.raw;
    est.anchor_ids = ids;
    for (int k = 0; k < 3; ++k)
        est.per_link_distances[k] = double(tri[k]->distance);
    est.condition_number = orient.condition_number;
    est.trilateration_residual_m = tl.residual_m;
    est.usable_anchors = anchors.size();
    return est;
}

LocalizationEstimate localize(std::span<const OpticalMeasurement> measurements, std::span<const Vcsel> registry,
                              const Photodetector &pd, const Room &room, const LocalizeOptions &options)
{
    struct Pair
    {
        std::optional<LD> a, b;
    };
    std::map<int, Pair> paired;
    for (const auto &m : measurements)
    {
        if (m.received_power_w < 0.0L)
            throw ArgumentError("received power must be non-negative");
        auto &slot = paired[m.vcsel_id];
        (m.mode == ModeLabel::a ? slot.a : slot.b) = m.received_power_w;
    }

    std::map<int, const Vcsel *> by_id;
    for (const auto &v : registry)
        by_id[v.id] = &v;

    std::vector<RangedAnchor> anchors;
    std::optional<InfeasibleRatioError> first_infeasible;
    for (const auto &[id, pw] : paired)
    {
        if (!pw.a || !pw.b || !(*pw.a > options.power_floor_w) || !(*pw.b > options.power_floor_w))
            continue;
        const auto it = by_id.find(id);
        if (it == by_id.end())
            throw ArgumentError("measurement references unknown VCSEL " + std::to_string(id));
        const Vcsel &v = *it->second;
        try
        {
            const LD d = mode_ratio_distance(*pw.a, *pw.b, v.mode_a, v.mode_b, pd.area_m2);
            if (!(d > 0.0L))
                continue;
            anchors.push_back({v.id, v.panel_id, v.position, &v.mode_a, d, *pw.a});
        }
        catch (const InfeasibleRatioError &e)
        {
            if (!first_infeasible)
                first_infeasible = e;
        }
    }
    if (anchors.size() < 3)
    {
        if (first_infeasible)
            throw *first_infeasible;
        throw InsufficientAnchorsError("fewer than three VCSELs measured in both modes", anchors.size());
    }
    return solve_pose(anchors, pd.area_m2, room);
}

double ranging_error(double d, double z_r, double alpha)
{
    if (!(d > 0.0))
        throw ArgumentError("distance must be positive");
    if (std::isinf(alpha) && alpha > 0.0)
        return 0.0;
    const double q = (z_r / d) * (z_r / d);
    if (!(alpha - q > 0.0))
        throw NoiseDominatedError("SNR too low to recover the distance", alpha - q);
    // 1 - x = (1 + q) / (1 + alpha) with x the squared ratio d_hat^2 / d^2
    const double x = (alpha - q) / (1.0 + alpha);
    return d * ((1.0 + q) / (1.0 + alpha)) / (1.0 + std::sqrt(x));
}

double estimated_distance_under_noise(double d, double z_r, double alpha)
{
    if (!(d > 0.0))
        throw ArgumentError("distance must be positive");
    if (std::isinf(alpha) && alpha > 0.0)
        return d;
    const double q = (z_r / d) * (z_r / d);
    if (!(alpha - q > 0.0))
        throw NoiseDominatedError("SNR too low to recover the distance", alpha - q);
    return std::min(d, d * std::sqrt((alpha - q) / (1.0 + alpha)));
}

} // namespace leris
