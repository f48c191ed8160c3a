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
#include "urbanrt/city.hpp"
#include "urbanrt/io.hpp"

#include "urbanrt/rng.hpp"

#include <cmath>
#include <fstream>

namespace urbanrt
{

void ItuParams::validate() const
{
    if (!(alpha0 > 0.0 && alpha0 < 1.0))
        throw LayoutError("alpha0 must lie in (0, 1)");
    if (!(beta0 > 0.0))
        throw LayoutError("beta0 must be positive");
    if (!(gamma0 > 0.0))
        throw LayoutError("gamma0 must be positive");
    if (n_buildings < 1)
        throw LayoutError("building count must be at least 1");
}

LayoutDims derive_layout_dims(const ItuParams &p)
{
    p.validate();
    LayoutDims d;
    d.building_width_m = 1000.0 * std::sqrt(p.alpha0 / p.beta0);
    d.street_width_m = 1000.0 / std::sqrt(p.beta0) - d.building_width_m;
    if (!(d.street_width_m > 0.0))
        throw LayoutError("degenerate layout: street width is not positive");
    d.side_km = d.pitch_m() * std::sqrt(static_cast<double>(p.n_buildings)) / 1000.0;
    return d;
}

double sample_height(double gamma0, double u)
{
    if (!(gamma0 > 0.0))
        throw std::domain_error("height scale must be positive");
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("uniform variate must lie in (0, 1)");
    return gamma0 * std::sqrt(-2.0 * std::log(u));
}

std::pair<int, int> grid_shape(int n_buildings)
{
    if (n_buildings < 1)
        throw LayoutError("building count must be at least 1");
    const int rows = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_buildings)) - 1e-12));
    return {rows, n_buildings / rows};
}

CityLayout generate_city(const ItuParams &p, std::uint64_t seed, const std::string &material)
{
    CityLayout city;
    city.params = p;
    city.dims = derive_layout_dims(p);
    city.seed = seed;
    std::tie(city.rows, city.cols) = grid_shape(p.n_buildings);

    const double pitch = city.dims.pitch_m();
    const double cap = 10.0 * p.gamma0;
    Rng rng(seed, static_cast<std::uint64_t>(RngStream::building_heights));
    city.buildings.reserve(static_cast<std::size_t>(city.rows) * city.cols);
    for (int r = 0; r < city.rows; ++r)
    {
        for (int c = 0; c < city.cols; ++c)
        {
            double h = sample_height(p.gamma0, rng.uniform_open());
            while (h > cap)
                h = sample_height(p.gamma0, rng.uniform_open());
            city.buildings.push_back({{(c + 0.5) * pitch, (r + 0.5) * pitch}, city.dims.building_width_m, h, material});
        }
    }
    return city;
}

int CityLayout::building_at(Vec2 p) const
{
    const double pitch = dims.pitch_m();
    if (pitch <= 0.0 || buildings.size() != static_cast<std::size_t>(rows) * cols)
    {
        // layouts edited by hand: fall back to a scan
        for (std::size_t i = 0; i < buildings.size(); ++i)
        {
            const Building &b = buildings[i];
            if (std::abs(p.x - b.center.x) <= 0.5 * b.width_m && std::abs(p.y - b.center.y) <= 0.5 * b.width_m)
                return static_cast<int>(i);
        }
        return -1;
    }
    const int c = static_cast<int>(std::floor(p.x / pitch));
    const int r = static_cast<int>(std::floor(p.y / pitch));
    if (c < 0 || c >= cols || r < 0 || r >= rows)
        return -1;
    const int idx = r * cols + c;
    const Building &b = buildings[idx];
    if (std::abs(p.x - b.center.x) <= 0.5 * b.width_m && std::abs(p.y - b.center.y) <= 0.5 * b.width_m)
        return idx;
    return -1;
}

nlohmann::json layout_to_json(const CityLayout &layout)
{
    nlohmann::json j;
    j["format"] = "urbanrt-layout";
    j["version"] = 1;
    j["seed"] = layout.seed;
    j["params"] = {{"alpha0", layout.params.alpha0},
                   {"beta0_per_km2", layout.params.beta0},
                   {"gamma0_m", layout.params.gamma0},
                   {"n_buildings_requested", layout.params.n_buildings}};
    j["dims"] = {{"building_width_m", layout.dims.building_width_m},
                 {"street_width_m", layout.dims.street_width_m},
                 {"side_km", layout.dims.side_km},
                 {"area_km2", layout.dims.area_km2()}};
    j["grid"] = {{"rows", layout.rows},
                 {"cols", layout.cols},
                 {"n_buildings", layout.buildings.size()},
                 {"extent_x_m", layout.extent_x_m()},
                 {"extent_y_m", layout.extent_y_m()}};
    auto &arr = j["buildings"] = nlohmann::json::array();
    for (const Building &b : layout.buildings)
        arr.push_back({{"center_m", {b.center.x, b.center.y}},
                       {"width_m", b.width_m},
                       {"height_m", b.height_m},
                       {"material", b.material}});
    return j;
}

CityLayout layout_from_json(const nlohmann::json &j)
{
    if (j.value("format", std::string{}) != "urbanrt-layout")
        throw LayoutError("not an urbanrt layout document");
    CityLayout city;
    city.seed = j.at("seed").get<std::uint64_t>();
    const auto &p = j.at("params");
    city.params = {p.at("alpha0").get<double>(), p.at("beta0_per_km2").get<double>(), p.at("gamma0_m").get<double>(),
                   p.at("n_buildings_requested").get<int>()};
    const auto &d = j.at("dims");
    city.dims = {d.at("building_width_m").get<double>(), d.at("street_width_m").get<double>(),
                 d.at("side_km").get<double>()};
    const auto &g = j.at("grid");
    city.rows = g.at("rows").get<int>();
    city.cols = g.at("cols").get<int>();
    for (const auto &b : j.at("buildings"))
    {
        Building out;
        out.center = {b.at("center_m").at(0).get<double>(), b.at("center_m").at(1).get<double>()};
        out.width_m = b.at("width_m").get<double>();
        out.height_m = b.at("height_m").get<double>();
        out.material = b.at("material").get<std::string>();
        if (!(out.height_m > 0.0) || !(out.width_m > 0.0))
            throw LayoutError("building with non-positive size");
        city.buildings.push_back(std::move(out));
    }
    return city;
}

void save_layout(const CityLayout &layout, const std::filesystem::path &path)
{
    const std::string text = layout_to_json(layout).dump(1);
    write_file_atomic(path, [&](std::ostream &out) { out << text << '\n'; });
}

CityLayout load_layout(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    return layout_from_json(nlohmann::json::parse(in));
}

} // namespace urbanrt
