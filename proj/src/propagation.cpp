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
#include "urbanrt/propagation.hpp"

#include <cmath>

namespace urbanrt
{

std::complex<double> fresnel_coeff(std::complex<double> eps_c, double theta_i, Polarization pol)
{
    const double c = std::cos(theta_i);
    const double s = std::sin(theta_i);
    const std::complex<double> q = std::sqrt(eps_c - s * s);
    if (pol == Polarization::te)
        return (c - q) / (c + q);
    return (eps_c * c - q) / (eps_c * c + q);
}

std::complex<double> slab_transmission(std::complex<double> eps_c, double theta_i, Polarization pol,
                                       double thickness_m, double frequency_hz)
{
    const std::complex<double> gamma = fresnel_coeff(eps_c, theta_i, pol);
    const double s = std::sin(theta_i);
    const double cos_t = std::max(std::real(std::sqrt(1.0 - s * s / eps_c)), 1e-9);
    const double k0 = 2.0 * kPi * frequency_hz / kSpeedOfLight;
    const double alpha = k0 * std::abs(std::imag(std::sqrt(eps_c)));
    const double magnitude = (1.0 - std::norm(gamma)) * std::exp(-alpha * thickness_m / cos_t);
    return std::polar(magnitude, std::arg(1.0 - gamma * gamma));
}

double knife_edge_loss(double v)
{
    if (v <= -0.78)
        return 0.0;
    return 6.9 + 20.0 * std::log10(std::sqrt((v - 0.1) * (v - 0.1) + 1.0) + v - 0.1);
}

double fresnel_kirchhoff_v(double h, double d1, double d2, double wavelength_m)
{
    return h * std::sqrt(2.0 * (d1 + d2) / (wavelength_m * d1 * d2));
}

Polarization dominant_polarization(Vec3 k, Vec3 n)
{
    const Vec3 z{0.0, 0.0, 1.0};
    const Vec3 te_axis = cross(k, n);
    const double te_norm = te_axis.norm();
    if (te_norm < 1e-12)
        return Polarization::tm; // normal incidence: both coincide
    const double kz = dot(z, k);
    const double perp2 = 1.0 - kz * kz; // |z projected transverse to k|^2
    const double te_share = dot(z, te_axis / te_norm);
    const double te2 = te_share * te_share;
    return te2 > perp2 - te2 ? Polarization::te : Polarization::tm;
}

} // namespace urbanrt
