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

#include "urbanrt/geometry.hpp"

#include <complex>
#include <stdexcept>
#include <vector>

namespace urbanrt
{

enum class ElementKind
{
    sector,
    isotropic,
    handgrip,
};

/// Parabolic single-element pattern:
///   G(az, el) = G_max - min(-(A_az + A_el), A_m),
///   A_az = -min(12 (az / hpbw_az)^2, A_m),  A_el = -min(12 (el / hpbw_el)^2, SLA).
struct ElementPattern
{
    ElementKind kind = ElementKind::isotropic;
    double hpbw_az_deg = 360.0;
    double hpbw_el_deg = 360.0;
    double max_gain_dbi = 0.0;
    double front_back_db = 0.0;
    double sla_db = 0.0;

    /// Gain in the element's local frame (boresight at az = el = 0).
    double gain_dbi(AzEl local) const;
    double gain_linear(AzEl local) const;
    void validate() const;
    friend bool operator==(const ElementPattern &, const ElementPattern &) = default;

    /// Base-station sector element: 65 deg HPBW, 30 dBi, 30 dB front-to-back and side-lobe floor.
    static ElementPattern sector(double max_gain_dbi = 30.0, double hpbw_deg = 65.0);
    static ElementPattern isotropic();
    /// One-hand-grip handset element: 125 deg HPBW, 5.3 dBi.
    static ElementPattern handgrip();
};

enum class ArrayKind
{
    ura,
    ula,
};

/// Planar array in its local frame: boresight +x, columns along +y, rows along +z,
/// element (r, c) at index r * cols + c with element 0 at the origin.
struct ArrayGeometry
{
    ArrayKind kind = ArrayKind::ula;
    int rows = 1;
    int cols = 1;
    double spacing_wl = 0.5;
    double azimuth_deg = 0.0;
    /// Boresight elevation; negative values point below the horizon.
    double tilt_deg = 0.0;

    int size() const { return rows * cols; }
    void validate() const;
    /// Element offset in metres in the global frame.
    Vec3 element_offset(int k, double wavelength_m) const;
    /// Global direction expressed in the array frame.
    Vec3 to_local(Vec3 global) const;
    AzEl local_azel(Vec3 global) const { return to_azel(to_local(global)); }
    friend bool operator==(const ArrayGeometry &, const ArrayGeometry &) = default;
};

enum class Role
{
    bs,
    ue,
};

class UnsupportedBand : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// Supported carrier frequencies in GHz.
inline constexpr double kSupportedBandsGhz[] = {4.6, 8.2, 15.0, 28.0};

/// Band index 0..3 for a supported carrier, or throws UnsupportedBand.
int band_index(double frequency_hz);

/// Array dimensions per band: BS 2x2/3x3/5x5/9x9 URA, UE 1x2 (4.6, 8.2 GHz) or 1x3 ULA.
ArrayGeometry aperture_config(double frequency_hz, Role role);

/// Plane-wave response exp(j 2 pi / lambda d_k . u) for unit direction `u` (global).
std::vector<std::complex<double>> steering(const ArrayGeometry &g, Vec3 direction, double wavelength_m);

/// Array + element pair used at one end of a link.
struct AntennaConfig
{
    ArrayGeometry geometry;
    ElementPattern element;

    double element_gain_linear(Vec3 global_direction) const
    {
        return element.gain_linear(geometry.local_azel(global_direction));
    }
};

/// Gain (dBi) of an array of identical elements steered to `steer` and observed along `dir`:
/// element gain + 10 log10(|sum_k conj(a_k(steer)) a_k(dir)|^2 / N).
double array_gain_dbi(const AntennaConfig &a, Vec3 steer, Vec3 dir, double wavelength_m);

} // namespace urbanrt
