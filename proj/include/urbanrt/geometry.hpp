// SPDX-License-Identifier: Apache-2.0
//
// urbanrt - site-specific urban downlink ray-tracing simulator
// Copyright (C) 2026 The urbanrt authors
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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace urbanrt
{

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kVacuumPermittivity = 8.8541878128e-12; // F/m

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

inline double wavelength(double frequency_hz) { return kSpeedOfLight / frequency_hz; }

struct Vec2
{
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
    double norm() const { return std::hypot(x, y); }
};

struct Vec3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 &operator+=(Vec3 o)
    {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr Vec3 &operator-=(Vec3 o)
    {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    constexpr Vec3 &operator*=(double s)
    {
        x *= s;
        y *= s;
        z *= s;
        return *this;
    }

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return a += b; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return a -= b; }
    friend constexpr Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
    friend constexpr Vec3 operator/(Vec3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }
    friend constexpr bool operator==(Vec3, Vec3) = default;

    constexpr double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    constexpr double norm2() const { return x * x + y * y + z * z; }
    Vec3 normalized() const { return *this / norm(); }
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(Vec3 a, Vec3 b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double distance(Vec3 a, Vec3 b) { return (a - b).norm(); }
inline double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Azimuth measured counter-clockwise from +x in the horizontal plane, elevation up from it.
struct AzEl
{
    double az_deg = 0.0;
    double el_deg = 0.0;
};

inline AzEl to_azel(Vec3 d)
{
    const double r = d.norm();
    if (r == 0.0)
        return {};
    return {rad2deg(std::atan2(d.y, d.x)), rad2deg(std::asin(std::clamp(d.z / r, -1.0, 1.0)))};
}

inline Vec3 from_azel(AzEl a)
{
    const double az = deg2rad(a.az_deg);
    const double el = deg2rad(a.el_deg);
    return {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
}

/// Oriented plane n.p = offset with unit normal n.
struct Plane
{
    Vec3 normal;
    double offset = 0.0;

    constexpr double signed_distance(Vec3 p) const { return dot(normal, p) - offset; }
    constexpr Vec3 mirror(Vec3 p) const { return p - 2.0 * signed_distance(p) * normal; }
};

struct Aabb
{
    Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
    Vec3 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity()};

    constexpr void expand(Vec3 p)
    {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    constexpr void expand(const Aabb &b)
    {
        expand(b.lo);
        expand(b.hi);
    }
    constexpr bool empty() const { return lo.x > hi.x; }
    constexpr Vec3 center() const { return (lo + hi) * 0.5; }
    constexpr Vec3 extent() const { return hi - lo; }
    constexpr bool contains(Vec3 p, double tol = 0.0) const
    {
        return p.x >= lo.x - tol && p.x <= hi.x + tol && p.y >= lo.y - tol && p.y <= hi.y + tol &&
               p.z >= lo.z - tol && p.z <= hi.z + tol;
    }

    /// True when the whole box lies strictly on the negative side of the plane.
    constexpr bool outside(const Plane &pl) const
    {
        const Vec3 far{pl.normal.x >= 0 ? hi.x : lo.x, pl.normal.y >= 0 ? hi.y : lo.y,
                       pl.normal.z >= 0 ? hi.z : lo.z};
        return pl.signed_distance(far) < 0.0;
    }

    /// Slab test; returns the entry parameter or +inf when the ray misses within [0, t_max].
    double ray_entry(Vec3 origin, Vec3 inv_dir, double t_max) const
    {
        double t0 = 0.0;
        double t1 = t_max;
        for (int a = 0; a < 3; ++a)
        {
            double tn = (lo[a] - origin[a]) * inv_dir[a];
            double tf = (hi[a] - origin[a]) * inv_dir[a];
            if (std::isnan(tn) || std::isnan(tf))
            {
                // origin on the slab boundary with zero direction component
                if (origin[a] < lo[a] || origin[a] > hi[a])
                    return std::numeric_limits<double>::infinity();
                continue;
            }
            if (tn > tf)
                std::swap(tn, tf);
            t0 = std::max(t0, tn);
            t1 = std::min(t1, tf);
            if (t0 > t1)
                return std::numeric_limits<double>::infinity();
        }
        return t0;
    }
};

} // namespace urbanrt
