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
#include "urbanrt/materials.hpp"

#include "urbanrt/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace urbanrt
{

void Material::validate() const
{
    if (name.empty())
        throw MaterialError("material without a name");
    for (double s : sigma_s_per_m)
        if (!(s >= 0.0))
            throw MaterialError("material '" + name + "': conductivity must be non-negative");
    if (!(epsr >= 1.0))
        throw MaterialError("material '" + name + "': relative permittivity must be >= 1");
    if (!(thickness_m > 0.0))
        throw MaterialError("material '" + name + "': thickness must be positive");
}

double Material::conductivity(double frequency_hz) const
{
    const double f = frequency_hz / 1e9;
    if (f <= kMaterialTableGhz.front())
        return sigma_s_per_m.front();
    if (f >= kMaterialTableGhz.back())
        return sigma_s_per_m.back();
    std::size_t i = 0;
    while (f > kMaterialTableGhz[i + 1])
        ++i;
    const double f0 = kMaterialTableGhz[i];
    const double f1 = kMaterialTableGhz[i + 1];
    const double s0 = sigma_s_per_m[i];
    const double s1 = sigma_s_per_m[i + 1];
    if (f == f1)
        return s1;
    const double w = std::log(f / f0) / std::log(f1 / f0);
    if (s0 <= 0.0 || s1 <= 0.0)
        return s0 + (s1 - s0) * w; // log-log undefined at zero
    return std::exp(std::log(s0) + (std::log(s1) - std::log(s0)) * w);
}

std::complex<double> complex_permittivity(const Material &m, double frequency_hz)
{
    if (!(frequency_hz >= 1e9 && frequency_hz <= 100e9))
        throw MaterialError("frequency outside the supported 1-100 GHz range");
    const double sigma = m.conductivity(frequency_hz);
    return {m.epsr, -sigma / (2.0 * kPi * frequency_hz * kVacuumPermittivity)};
}

MaterialLibrary::MaterialLibrary()
{
    set({"concrete", {0.14, 0.23, 0.38, 0.63}, 5.24, 0.3});
    set({"glass", {0.03, 0.06, 0.12, 0.24}, 6.31, 0.3});
    set({"brick", {0.03, 0.03, 0.04, 0.04}, 3.91, 0.3});
    set({"dry_earth", {0.003, 0.01, 0.036, 0.147}, 3.00, 0.3});
}

const Material &MaterialLibrary::get(const std::string &name) const
{
    auto it = materials_.find(name);
    if (it == materials_.end())
        throw MaterialError("unknown material '" + name + "'");
    return it->second;
}

void MaterialLibrary::set(Material m)
{
    m.validate();
    materials_[m.name] = std::move(m);
}

void MaterialLibrary::set_thickness(double thickness_m)
{
    if (!(thickness_m > 0.0))
        throw MaterialError("wall thickness must be positive");
    for (auto &[name, m] : materials_)
        m.thickness_m = thickness_m;
}

} // namespace urbanrt
