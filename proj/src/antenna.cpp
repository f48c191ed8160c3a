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
#include "urbanrt/antenna.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace urbanrt
{

double ElementPattern::gain_dbi(AzEl local) const
{
    if (kind == ElementKind::isotropic)
        return 0.0;
    double az = std::fmod(local.az_deg, 360.0);
    if (az > 180.0)
        az -= 360.0;
    else if (az <= -180.0)
        az += 360.0;
    const double el = std::clamp(local.el_deg, -90.0, 90.0);
    const double a_az = -std::min(12.0 * (az / hpbw_az_deg) * (az / hpbw_az_deg), front_back_db);
    const double a_el = -std::min(12.0 * (el / hpbw_el_deg) * (el / hpbw_el_deg), sla_db);
    return max_gain_dbi - std::min(-(a_az + a_el), front_back_db);
}

double ElementPattern::gain_linear(AzEl local) const
{
    if (kind == ElementKind::isotropic)
        return 1.0;
    return std::pow(10.0, gain_dbi(local) / 10.0);
}

void ElementPattern::validate() const
{
    if (kind == ElementKind::isotropic)
        return;
    if (!(hpbw_az_deg > 0.0 && hpbw_az_deg < 360.0) || !(hpbw_el_deg > 0.0 && hpbw_el_deg < 360.0))
        throw std::invalid_argument("element HPBW must lie in (0, 360) degrees");
    if (!(front_back_db >= 0.0) || !(sla_db >= 0.0))
        throw std::invalid_argument("element attenuation limits must be non-negative");
}

ElementPattern ElementPattern::sector(double max_gain_dbi, double hpbw_deg)
{
    return {ElementKind::sector, hpbw_deg, hpbw_deg, max_gain_dbi, 30.0, 30.0};
}

ElementPattern ElementPattern::isotropic()
{
    return {ElementKind::isotropic, 360.0, 360.0, 0.0, 0.0, 0.0};
}

ElementPattern ElementPattern::handgrip()
{
    return {ElementKind::handgrip, 125.0, 125.0, 5.3, 25.0, 25.0};
}

void ArrayGeometry::validate() const
{
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("array dimensions must be positive");
    if (!(spacing_wl > 0.0))
        throw std::invalid_argument("element spacing must be positive");
    if (kind == ArrayKind::ula && rows != 1)
        throw std::invalid_argument("a ULA has a single row");
}

namespace
{

struct Frame
{
    Vec3 x, y, z;
};

Frame array_frame(const ArrayGeometry &g)
{
    const double az = deg2rad(g.azimuth_deg);
    const double tilt = deg2rad(g.tilt_deg);
    const double ca = std::cos(az), sa = std::sin(az);
    const double ct = std::cos(tilt), st = std::sin(tilt);
    return {{ca * ct, sa * ct, st}, {-sa, ca, 0.0}, {-st * ca, -st * sa, ct}};
}

} // namespace

Vec3 ArrayGeometry::to_local(Vec3 global) const
{
    const Frame f = array_frame(*this);
    return {dot(global, f.x), dot(global, f.y), dot(global, f.z)};
}

Vec3 ArrayGeometry::element_offset(int k, double wavelength_m) const
{
    const Frame f = array_frame(*this);
    const int r = k / cols;
    const int c = k % cols;
    const double d = spacing_wl * wavelength_m;
    return f.y * (c * d) + f.z * (r * d);
}

int band_index(double frequency_hz)
{
    for (int i = 0; i < 4; ++i)
        if (std::abs(frequency_hz - kSupportedBandsGhz[i] * 1e9) < 1e3)
            return i;
    throw UnsupportedBand("unsupported band " + std::to_string(frequency_hz / 1e9) +
                          " GHz; supported bands are 4.6, 8.2, 15 and 28 GHz");
}

ArrayGeometry aperture_config(double frequency_hz, Role role)
{
    const int b = band_index(frequency_hz);
    ArrayGeometry g;
    if (role == Role::bs)
    {
        static constexpr int kUra[] = {2, 3, 5, 9};
        g.kind = ArrayKind::ura;
        g.rows = g.cols = kUra[b];
    }
    else
    {
        g.kind = ArrayKind::ula;
        g.rows = 1;
        g.cols = b < 2 ? 2 : 3;
    }
    return g;
}

std::vector<std::complex<double>> steering(const ArrayGeometry &g, Vec3 direction, double wavelength_m)
{
    if (!(wavelength_m > 0.0))
        throw std::invalid_argument("wavelength must be positive");
    const Vec3 u = direction.normalized();
    const Frame f = array_frame(g);
    const double k = 2.0 * kPi / wavelength_m;
    const double d = g.spacing_wl * wavelength_m;
    const double uy = dot(u, f.y) * d * k;
    const double uz = dot(u, f.z) * d * k;
    std::vector<std::complex<double>> a(static_cast<std::size_t>(g.size()));
    for (int r = 0; r < g.rows; ++r)
        for (int c = 0; c < g.cols; ++c)
            a[static_cast<std::size_t>(r * g.cols + c)] = std::polar(1.0, c * uy + r * uz);
    return a;
}

double array_gain_dbi(const AntennaConfig &a, Vec3 steer, Vec3 dir, double wavelength_m)
{
    const auto w = steering(a.geometry, steer, wavelength_m);
    const auto s = steering(a.geometry, dir, wavelength_m);
    std::complex<double> af{};
    for (std::size_t k = 0; k < w.size(); ++k)
        af += std::conj(w[k]) * s[k];
    const double element = a.element.gain_dbi(a.geometry.local_azel(dir));
    const double factor = std::norm(af) / static_cast<double>(w.size());
    return element + 10.0 * std::log10(std::max(factor, 1e-30));
}

} // namespace urbanrt
