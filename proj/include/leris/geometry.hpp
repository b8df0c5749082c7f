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

#pragma once

#include <cmath>
#include <numbers>

namespace leris
{

inline constexpr double pi = std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / pi; }

// 3-vector used both for points (meters) and directions (unit norm).
// Frame convention: right-handed, z up, room corner at the origin.
struct Vec3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr Vec3 &operator+=(const Vec3 &o)
    {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr bool operator==(const Vec3 &) const = default;
};

constexpr Vec3 operator*(double s, const Vec3 &v) { return v * s; }

constexpr double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3 &a, const Vec3 &b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3 &v) { return std::hypot(v.x, v.y, v.z); }
inline double distance(const Vec3 &a, const Vec3 &b) { return norm(b - a); }

// Unit vector along v. Throws DegenerateGeometryError for the zero vector.
Vec3 normalized(const Vec3 &v);

// (b - a) / |b - a|. Throws DegenerateGeometryError when a == b.
Vec3 unit_from_to(const Vec3 &a, const Vec3 &b);

// cos of the incidence angle: receiver_normal . unit_from_to(receiver, source).
double incidence_cos(const Vec3 &receiver_normal, const Vec3 &source, const Vec3 &receiver);

// (sin t cos p, sin t sin p, cos t) for polar t in [0, pi], azimuth p in [0, 2 pi).
Vec3 spherical_direction(double theta, double phi);

// Angle in [0, pi] between two directions (robust near 0 and pi).
double angle_between(const Vec3 &a, const Vec3 &b);

// Axis-aligned room, default 10 m x 10 m x 3 m.
struct Room
{
    Vec3 lo{0.0, 0.0, 0.0};
    Vec3 hi{10.0, 10.0, 3.0};

    bool contains(const Vec3 &p, double tolerance = 1e-9) const;
    Vec3 center() const { return (lo + hi) * 0.5; }
};

// Orthonormal local frame. The z axis is the surface normal, the x axis is
// horizontal (z_world x normal) and y completes the right-handed triad.
// Vertical normals fall back to the world x axis as the local x axis.
class Frame
{
public:
    Frame(const Vec3 &origin, const Vec3 &normal);

    const Vec3 &origin() const { return origin_; }
    const Vec3 &ex() const { return ex_; }
    const Vec3 &ey() const { return ey_; }
    const Vec3 &ez() const { return ez_; }

    Vec3 to_local(const Vec3 &world_point) const;
    Vec3 direction_to_local(const Vec3 &world_direction) const;
    Vec3 to_world(const Vec3 &local_point) const;
    Vec3 direction_to_world(const Vec3 &local_direction) const;

private:
    Vec3 origin_, ex_, ey_, ez_;
};

// Polar/azimuth angles of a direction expressed in some frame; azimuth in [0, 2 pi).
struct SphericalAngles
{
    double theta = 0.0;
    double phi = 0.0;
};

SphericalAngles to_spherical(const Vec3 &direction);

} // namespace leris
