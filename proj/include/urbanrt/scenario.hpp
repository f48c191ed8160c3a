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

#include "urbanrt/city.hpp"
#include "urbanrt/link_metrics.hpp"
#include "urbanrt/ray_engine.hpp"
#include "urbanrt/scene.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace urbanrt
{

enum class Environment
{
    suburban,
    urban,
    highrise,
    imported,
};

enum class Interference
{
    free,
    full,
};

enum class UeType
{
    vehicular,
    pedestrian,
};

std::string to_string(Environment e);
std::string to_string(Interference i);
std::string to_string(UeType u);
Environment environment_from_string(const std::string &s);
Interference interference_from_string(const std::string &s);
UeType ue_type_from_string(const std::string &s);

inline constexpr double kSectorAzimuthsDeg[3] = {0.0, 120.0, 240.0};
inline constexpr double kSectorTiltDeg = -12.0;
inline constexpr double kUeHeightM = 2.0;

struct Site
{
    Vec2 position;
    double height_m = 0.0;

    Vec3 antenna() const { return {position.x, position.y, height_m}; }
};

struct Sector
{
    int site = 0;
    double azimuth_deg = 0.0;
    double tilt_deg = kSectorTiltDeg;
};

struct Deployment
{
    double isd_m = 350.0;
    std::vector<Site> sites;
    /// Three per site, site-major: sector id = 3 * site + k.
    std::vector<Sector> sectors;
};

/// Hexagonal lattice centred on `center`, grown ring by ring while any lattice point of a
/// ring lies inside the area square widened by isd / 4 on each side. Heights are zero.
Deployment deploy_hex(double area_side_m, double isd_m, Vec2 center = {});

/// Height of the building nearest to p (by footprint distance) plus `standoff_m`;
/// `fallback_m` when the layout has no buildings.
double site_height(const CityLayout &layout, Vec2 p, double standoff_m = 1.0, double fallback_m = 25.0);

struct UeDrop
{
    std::vector<Vec2> positions;
    /// Array/handset azimuth per UE (deg).
    std::vector<double> heading_deg;
    double height_m = kUeHeightM;
    std::uint64_t seed = 0;

    Vec3 antenna(std::size_t k) const { return {positions[k].x, positions[k].y, height_m}; }
};

/// n points uniform over the street area of the layout (rejection sampling), with a
/// uniform random heading each. Throws LayoutError when sampling keeps failing.
UeDrop drop_ues(const CityLayout &layout, int n, std::uint64_t seed);

/// n points uniform over the square [lo, hi] with nothing overhead in `scene`.
UeDrop drop_ues(const Scene &scene, Vec2 lo, Vec2 hi, int n, std::uint64_t seed);

struct CdfPoint
{
    double value = 0.0;
    double fraction = 0.0;
};

/// Empirical CDF: sorted values, fraction i / N at the i-th order statistic.
std::vector<CdfPoint> aggregate_cdf(std::vector<double> values);

struct RunConfig
{
    Environment environment = Environment::suburban;
    /// City statistics; preset values for the environment unless overridden.
    ItuParams city = ItuParams::suburban();
    std::string building_material = "concrete";
    /// Per-building material overrides by row-major building index.
    std::map<int, std::string> building_materials;
    std::string ground_material = "dry_earth";
    /// Extra or replaced materials.
    std::vector<Material> materials;
    /// Geometry file for Environment::imported.
    std::filesystem::path geometry_path;

    BandConfig band = BandConfig::preset(4.6e9);
    Interference interference = Interference::free;
    UeType ue_type = UeType::vehicular;

    int n_realizations = 10;
    int n_ues = 370;
    std::uint64_t seed = 1;

    double isd_m = 350.0;
    /// Side of the deployment square; 0 derives it from the city (or imported bounds).
    double area_side_m = 0.0;
    double site_standoff_m = 1.0;
    double site_fallback_height_m = 25.0;

    double tx_power_w = 1.0;
    double bs_element_gain_dbi = 30.0;
    double bs_element_hpbw_deg = 65.0;
    double noise_psd_w_per_hz = kNoisePsd;
    double coverage_threshold_db = kCoverageThresholdDb;
    /// Full interference: sites farther than this from the UE are left out; 0 keeps all.
    double interference_radius_m = 0.0;

    TraceLimits limits;
    /// Worker threads for realizations; 0 uses the hardware concurrency.
    int threads = 0;

    void validate() const;
    /// Seed of realization r: seed + r (city and UE drop share it).
    std::uint64_t realization_seed(int r) const { return seed + static_cast<std::uint64_t>(r); }
    friend bool operator==(const RunConfig &, const RunConfig &) = default;
};

struct MetricsRow
{
    int realization = 0;
    UeMetrics metrics;
};

struct RunResult
{
    RunConfig config;
    std::vector<MetricsRow> rows;
    /// Number of deployed sites (identical across realizations).
    int n_sites = 0;

    std::vector<double> rates() const;
    std::vector<double> sinrs() const;
    std::vector<UeMetrics> metrics() const;
    double coverage() const;
    /// Empirical q-quantile of the pooled rates (lower order statistic, q in [0, 1]).
    double rate_quantile(double q) const;
};

/// Runs config.n_realizations drops for one band, interference mode and UE type.
RunResult run(const RunConfig &config);

/// Runs every combination of the given bands, UE types and interference modes from one
/// set of traces per realization (geometry does not depend on them). Results are ordered
/// band-major, then UE type, then interference mode, and are identical to separate runs.
std::vector<RunResult> run_matrix(const RunConfig &base, std::span<const double> bands_hz,
                                  std::span<const UeType> ue_types, std::span<const Interference> modes);

/// Scene and deployment of one realization, as the runner builds them.
struct Realization
{
    std::uint64_t seed = 0;
    CityLayout layout;
    Scene scene;
    Deployment deployment;
    UeDrop ues;
};

Realization build_realization(const RunConfig &config, int r);

/// Antennas used for a BS sector and for a UE in a given band.
AntennaConfig bs_antenna(const RunConfig &config, const BandConfig &band, const Sector &sector);
AntennaConfig ue_antenna(const BandConfig &band, UeType type, double heading_deg);

} // namespace urbanrt
