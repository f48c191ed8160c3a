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

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace urbanrt
{

/// Statistical urban geometry description: built-area ratio, building density
/// (buildings per km^2), Rayleigh height scale (m) and the requested building count.
struct ItuParams
{
    double alpha0 = 0.1;
    double beta0 = 750.0;
    double gamma0 = 8.0;
    int n_buildings = 1080;

    void validate() const;
    friend bool operator==(const ItuParams &, const ItuParams &) = default;

    static ItuParams suburban() { return {0.1, 750.0, 8.0, 1080}; }
    static ItuParams urban() { return {0.3, 500.0, 15.0, 720}; }
    static ItuParams highrise() { return {0.5, 300.0, 50.0, 432}; }
};

struct LayoutDims
{
    double building_width_m = 0.0;
    double street_width_m = 0.0;
    double side_km = 0.0;

    double pitch_m() const { return building_width_m + street_width_m; }
    double area_km2() const { return side_km * side_km; }
    friend bool operator==(const LayoutDims &, const LayoutDims &) = default;
};

struct Building
{
    Vec2 center;
    double width_m = 0.0;
    double height_m = 0.0;
    std::string material = "concrete";

    friend bool operator==(const Building &, const Building &) = default;
};

/// One realization of the statistical city: an axis-aligned grid of square footprints
/// occupying [0, extent_x] x [0, extent_y], each building centered in its grid cell.
struct CityLayout
{
    ItuParams params;
    LayoutDims dims;
    int rows = 0;
    int cols = 0;
    std::uint64_t seed = 0;
    std::vector<Building> buildings;

    double extent_x_m() const { return cols * dims.pitch_m(); }
    double extent_y_m() const { return rows * dims.pitch_m(); }
    Vec2 center() const { return {0.5 * extent_x_m(), 0.5 * extent_y_m()}; }

    /// Index of the building whose footprint contains p, or -1.
    int building_at(Vec2 p) const;

    friend bool operator==(const CityLayout &, const CityLayout &) = default;
};

class LayoutError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

LayoutDims derive_layout_dims(const ItuParams &p);

/// Inverse-CDF draw from the Rayleigh height distribution with scale gamma0.
double sample_height(double gamma0, double u);

/// Grid dimensions used for a requested building count: ceil(sqrt(n)) rows by
/// floor(n / rows) columns; the remainder is dropped.
std::pair<int, int> grid_shape(int n_buildings);

CityLayout generate_city(const ItuParams &p, std::uint64_t seed, const std::string &material = "concrete");

nlohmann::json layout_to_json(const CityLayout &layout);
CityLayout layout_from_json(const nlohmann::json &j);
void save_layout(const CityLayout &layout, const std::filesystem::path &path);
CityLayout load_layout(const std::filesystem::path &path);

} // namespace urbanrt
