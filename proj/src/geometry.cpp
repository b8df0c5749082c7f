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

#include "leris/geometry.hpp"
#include "leris/errors.hpp"

namespace leris
{

const char *to_string(ErrorKind kind) noexcept
{
    switch (kind)
    {
    case ErrorKind::argument: return "argument";
    case ErrorKind::degenerate_geometry: return "degenerate_geometry";
    case ErrorKind::infeasible_ratio: return "infeasible_ratio";
    case ErrorKind::inconsistent_ranges: return "inconsistent_ranges";
    case ErrorKind::ambiguous_solution: return "ambiguous_solution";
    case ErrorKind::ill_conditioned: return "ill_conditioned";
    case ErrorKind::insufficient_anchors: return "insufficient_anchors";
    case ErrorKind::noise_dominated: return "noise_dominated";
    case ErrorKind::quadrature: return "quadrature";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::validation: return "validation";
    case ErrorKind::io: return "io";
    case ErrorKind::unknown: return "unknown";
    }
    return "unknown";
}

Vec3 normalized(const Vec3 &v)
{
    const double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n))
        throw DegenerateGeometryError("cannot normalize a zero or non-finite vector");
    return v / n;
}

Vec3 unit_from_to(const Vec3 &a, const Vec3 &b)
{
    if (a == b)
        throw DegenerateGeometryError("coincident points have no direction");
    return normalized(b - a);
}

double incidence_cos(const Vec3 &receiver_normal, const Vec3 &source, const Vec3 &receiver)
{
    return dot(receiver_normal, unit_from_to(receiver, source));
}

Vec3 spherical_direction(double theta, double phi)
{
    if (!(theta >= 0.0 && theta <= pi))
        throw ArgumentError("polar angle outside [0, pi]");
    if (!(phi >= 0.0 && phi < 2.0 * pi))
        throw ArgumentError("azimuth outside [0, 2 pi)");
    const double s = std::sin(theta);
    return {s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
}

double angle_between(const Vec3 &a, const Vec3 &b)
{
    // atan2 form keeps full precision for nearly parallel vectors
    return std::atan2(norm(cross(a, b)), dot(a, b));
}

bool Room::contains(const Vec3 &p, double tolerance) const
{
    return p.x >= lo.x - tolerance && p.x <= hi.x + tolerance && p.y >= lo.y - tolerance &&
           p.y <= hi.y + tolerance && p.z >= lo.z - tolerance && p.z <= hi.z + tolerance;
}

Frame::Frame(const Vec3 &origin, const Vec3 &normal) : origin_(origin), ez_(normalized(normal))
{
    Vec3 horizontal = cross(Vec3{0.0, 0.0, 1.0}, ez_);
    if (norm(horizontal) < 1e-12)
        horizontal = Vec3{1.0, 0.0, 0.0};
    ex_ = normalized(horizontal);
    ey_ = cross(ez_, ex_);
}

Vec3 Frame::to_local(const Vec3 &world_point) const
{
    return direction_to_local(world_point - origin_);
}

Vec3 Frame::direction_to_local(const Vec3 &d) const
{
    return {dot(d, ex_), dot(d, ey_), dot(d, ez_)};
}

Vec3 Frame::to_world(const Vec3 &local_point) const
{
    return origin_ + direction_to_world(local_point);
}

Vec3 Frame::direction_to_world(const Vec3 &d) const
{
    return ex_ * d.x + ey_ * d.y + ez_ * d.z;
}

SphericalAngles to_spherical(const Vec3 &direction)
{
    const Vec3 u = normalized(direction);
    const double theta = std::atan2(std::hypot(u.x, u.y), u.z);
    double phi = std::atan2(u.y, u.x);
    if (phi < 0.0)
        phi += 2.0 * pi;
    if (phi >= 2.0 * pi)
        phi = 0.0;
    return {theta, phi};
}

} // namespace leris
