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

namespace urbanrt
{

enum class Polarization
{
    te, // E perpendicular to the plane of incidence
    tm, // E in the plane of incidence
};

/// Fresnel reflection coefficient of a half-space with relative complex permittivity
/// eps_c for incidence angle theta_i (rad, from the normal).
std::complex<double> fresnel_coeff(std::complex<double> eps_c, double theta_i, Polarization pol);

/// Field transmission factor of a slab of the given thickness: two interface crossings
/// with magnitude 1 - |Gamma|^2 and phase arg(1 - Gamma^2), times the in-slab
/// attenuation exp(-alpha d / cos theta_t).
std::complex<double> slab_transmission(std::complex<double> eps_c, double theta_i, Polarization pol,
                                       double thickness_m, double frequency_hz);

/// Knife-edge diffraction loss J(v) in dB; 0 dB for v <= -0.78.
double knife_edge_loss(double v);

/// Fresnel-Kirchhoff parameter for an edge at clearance h above the straight line between
/// two terminals at distances d1, d2 from the edge.
double fresnel_kirchhoff_v(double h, double d1, double d2, double wavelength_m);

/// Polarization component seen by a vertically polarized wave travelling along unit `k`
/// onto a surface with unit normal `n`: whichever of TE/TM carries the larger share.
Polarization dominant_polarization(Vec3 k, Vec3 n);

} // namespace urbanrt
