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

#include <array>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>

namespace urbanrt
{

/// Frequencies (GHz) at which material conductivities are tabulated.
inline constexpr std::array<double, 4> kMaterialTableGhz{4.6, 8.2, 15.0, 28.0};

struct Material
{
    std::string name;
    std::array<double, 4> sigma_s_per_m{}; // at kMaterialTableGhz
    double epsr = 1.0;
    double thickness_m = 0.3;

    void validate() const;
    /// Conductivity at f, log-log interpolated between table points and clamped outside.
    double conductivity(double frequency_hz) const;
    friend bool operator==(const Material &, const Material &) = default;
};

class MaterialError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// Relative complex permittivity eps_r - j sigma / (2 pi f eps0). Valid for 1-100 GHz.
std::complex<double> complex_permittivity(const Material &m, double frequency_hz);

/// Named material set. Starts with concrete, glass, brick and dry_earth.
class MaterialLibrary
{
  public:
    MaterialLibrary();

    const Material &get(const std::string &name) const;
    bool contains(const std::string &name) const { return materials_.count(name) != 0; }
    void set(Material m);
    void set_thickness(double thickness_m);
    const std::map<std::string, Material> &all() const { return materials_; }

  private:
    std::map<std::string, Material> materials_;
};

} // namespace urbanrt
