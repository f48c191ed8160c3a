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
#include "urbanrt/scenario.hpp"

#include "urbanrt/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace urbanrt
{

std::string to_string(Environment e)
{
    switch (e)
    {
    case Environment::suburban:
        return "suburban";
    case Environment::urban:
        return "urban";
    case Environment::highrise:
        return "highrise";
    case Environment::imported:
        return "imported";
    }
    return "?";
}

std::string to_string(Interference i)
{
    return i == Interference::free ? "free" : "full";
}

std::string to_string(UeType u)
{
    return u == UeType::vehicular ? "vehicular" : "pedestrian";
}

Environment environment_from_string(const std::string &s)
{
    for (Environment e : {Environment::suburban, Environment::urban, Environment::highrise, Environment::imported})
        if (to_string(e) == s)
            return e;
    throw std::invalid_argument("unknown environment '" + s + "' (expected suburban, urban, highrise or imported)");
}

Interference interference_from_string(const std::string &s)
{
    if (s == "free")
        return Interference::free;
    if (s == "full")
        return Interference::full;
    throw std::invalid_argument("unknown interference mode '" + s + "' (expected free or full)");
}

UeType ue_type_from_string(const std::string &s)
{
    if (s == "vehicular")
        return UeType::vehicular;
    if (s == "pedestrian")
        return UeType::pedestrian;
    throw std::invalid_argument("unknown UE type '" + s + "' (expected vehicular or pedestrian)");
}

Deployment deploy_hex(double area_side_m, double isd_m, Vec2 center)
{
    if (!(area_side_m > 0.0))
        throw std::invalid_argument("deployment area is too small for a site");
    if (!(isd_m > 0.0))
        throw std::invalid_argument("inter-site distance must be positive");
    const double limit = 0.5 * area_side_m + 0.25 * isd_m;
    const Vec2 a1{isd_m, 0.0};
    const Vec2 a2{0.5 * isd_m, 0.5 * std::sqrt(3.0) * isd_m};

    Deployment d;
    d.isd_m = isd_m;
    d.sites.push_back({center, 0.0});
    // ring k holds the lattice points at hex distance k, walked corner to corner
    static constexpr int kDirs[6][2] = {{-1, 1}, {-1, 0}, {0, -1}, {1, -1}, {1, 0}, {0, 1}};
    for (int k = 1;; ++k)
    {
        bool any = false;
        int i = k;
        int j = 0;
        for (const auto &dir : kDirs)
        {
            for (int step = 0; step < k; ++step)
            {
                const Vec2 off = a1 * i + a2 * j;
                if (std::abs(off.x) <= limit && std::abs(off.y) <= limit)
                {
                    d.sites.push_back({center + off, 0.0});
                    any = true;
                }
                i += dir[0];
                j += dir[1];
            }
        }
        if (!any)
            break;
    }
    for (int s = 0; s < static_cast<int>(d.sites.size()); ++s)
        for (double az : kSectorAzimuthsDeg)
            d.sectors.push_back({s, az, kSectorTiltDeg});
    return d;
}

double site_height(const CityLayout &layout, Vec2 p, double standoff_m, double fallback_m)
{
    if (layout.buildings.empty())
        return fallback_m;
    double best = std::numeric_limits<double>::infinity();
    double height = fallback_m;
    for (const Building &b : layout.buildings)
    {
        const double dx = std::max(0.0, std::abs(p.x - b.center.x) - 0.5 * b.width_m);
        const double dy = std::max(0.0, std::abs(p.y - b.center.y) - 0.5 * b.width_m);
        const double dist = std::hypot(dx, dy);
        if (dist < best)
        {
            best = dist;
            height = b.height_m + standoff_m;
        }
    }
    return height;
}

namespace
{

template <class Accept>
UeDrop drop_in_square(Vec2 lo, Vec2 hi, int n, std::uint64_t seed, Accept &&accept)
{
    if (n < 0)
        throw std::invalid_argument("UE count must be non-negative");
    UeDrop drop;
    drop.seed = seed;
    Rng pos(seed, static_cast<std::uint64_t>(RngStream::ue_positions));
    Rng heading(seed, static_cast<std::uint64_t>(RngStream::ue_orientation));
    const long long max_tries = 1000LL * std::max(n, 1);
    long long tries = 0;
    while (static_cast<int>(drop.positions.size()) < n)
    {
        if (++tries > max_tries)
            throw LayoutError("UE placement failed: no street area found");
        const Vec2 p{pos.uniform(lo.x, hi.x), pos.uniform(lo.y, hi.y)};
        if (!accept(p))
            continue;
        drop.positions.push_back(p);
        drop.heading_deg.push_back(heading.uniform(-180.0, 180.0));
    }
    return drop;
}

} // namespace

UeDrop drop_ues(const CityLayout &layout, int n, std::uint64_t seed)
{
    return drop_in_square({0.0, 0.0}, {layout.extent_x_m(), layout.extent_y_m()}, n, seed,
                          [&](Vec2 p) { return layout.building_at(p) < 0; });
}

UeDrop drop_ues(const Scene &scene, Vec2 lo, Vec2 hi, int n, std::uint64_t seed)
{
    return drop_in_square(lo, hi, n, seed, [&](Vec2 p) {
        return !scene.intersect_first({p.x, p.y, 0.01}, {0.0, 0.0, 1.0}, 1e7).has_value();
    });
}

std::vector<CdfPoint> aggregate_cdf(std::vector<double> values)
{
    if (values.empty())
        throw std::invalid_argument("CDF of an empty sample");
    std::sort(values.begin(), values.end());
    std::vector<CdfPoint> cdf;
    cdf.reserve(values.size());
    const double n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        cdf.push_back({values[i], static_cast<double>(i + 1) / n});
    return cdf;
}

void RunConfig::validate() const
{
    if (environment == Environment::imported)
    {
        if (geometry_path.empty())
            throw std::invalid_argument("imported environment needs geometry_path");
    }
    else
        city.validate();
    band.validate();
    limits.validate();
    if (n_realizations < 1)
        throw std::invalid_argument("n_realizations must be at least 1");
    if (n_ues < 1)
        throw std::invalid_argument("n_ues must be at least 1");
    if (!(isd_m > 0.0))
        throw std::invalid_argument("isd_m must be positive");
    if (!(area_side_m >= 0.0))
        throw std::invalid_argument("area_side_m must be non-negative");
    if (!(site_standoff_m >= 0.0) || !(site_fallback_height_m > 0.0))
        throw std::invalid_argument("site heights must be positive");
    if (!(tx_power_w > 0.0))
        throw std::invalid_argument("tx_power_w must be positive");
    if (!(bs_element_hpbw_deg > 0.0 && bs_element_hpbw_deg < 360.0))
        throw std::invalid_argument("bs_element_hpbw_deg must lie in (0, 360)");
    if (!(noise_psd_w_per_hz > 0.0))
        throw std::invalid_argument("noise_psd_w_per_hz must be positive");
    if (!(interference_radius_m >= 0.0))
        throw std::invalid_argument("interference_radius_m must be non-negative");
    if (threads < 0)
        throw std::invalid_argument("threads must be non-negative");
    for (const Material &m : materials)
        m.validate();
}

std::vector<double> RunResult::rates() const
{
    std::vector<double> v;
    v.reserve(rows.size());
    for (const MetricsRow &r : rows)
        v.push_back(r.metrics.rate_bps);
    return v;
}

std::vector<double> RunResult::sinrs() const
{
    std::vector<double> v;
    v.reserve(rows.size());
    for (const MetricsRow &r : rows)
        v.push_back(r.metrics.sinr);
    return v;
}

std::vector<UeMetrics> RunResult::metrics() const
{
    std::vector<UeMetrics> v;
    v.reserve(rows.size());
    for (const MetricsRow &r : rows)
        v.push_back(r.metrics);
    return v;
}

double RunResult::coverage() const
{
    const auto m = metrics();
    return coverage_probability(m, db_to_linear(config.coverage_threshold_db));
}

double RunResult::rate_quantile(double q) const
{
    if (rows.empty())
        throw std::invalid_argument("quantile of an empty run");
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("quantile level must lie in [0, 1]");
    auto v = rates();
    std::sort(v.begin(), v.end());
    // smallest value whose empirical CDF reaches q
    const auto n = v.size();
    std::size_t k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    k = std::clamp<std::size_t>(k, 1, n);
    return v[k - 1];
}

namespace
{

MaterialLibrary library_for(const RunConfig &config)
{
    MaterialLibrary lib;
    for (const Material &m : config.materials)
        lib.set(m);
    return lib;
}

} // namespace

Realization build_realization(const RunConfig &config, int r)
{
    Realization real;
    real.seed = config.realization_seed(r);
    const MaterialLibrary lib = library_for(config);
    Vec2 center;
    double side = config.area_side_m;
    if (config.environment == Environment::imported)
    {
        real.scene = import_obj(config.geometry_path, lib, true, config.ground_material);
        Aabb box;
        for (const Face &f : real.scene.faces())
            if (f.two_sided)
                box.expand(f.box);
        if (box.empty())
            box.expand(Vec3{});
        center = {box.center().x, box.center().y};
        if (side <= 0.0)
            side = std::max({box.extent().x, box.extent().y, config.isd_m});
        real.deployment = deploy_hex(side, config.isd_m, center);
        for (Site &s : real.deployment.sites)
            s.height_m = config.site_fallback_height_m;
        const Vec2 half{0.5 * side, 0.5 * side};
        real.ues = drop_ues(real.scene, center - half, center + half, config.n_ues, real.seed);
        return real;
    }

    real.layout = generate_city(config.city, real.seed, config.building_material);
    for (const auto &[index, material] : config.building_materials)
    {
        if (index < 0 || static_cast<std::size_t>(index) >= real.layout.buildings.size())
            throw std::invalid_argument("building material override for a missing building " + std::to_string(index));
        real.layout.buildings[static_cast<std::size_t>(index)].material = material;
    }
    real.scene = build_scene(real.layout, lib, config.ground_material);
    center = real.layout.center();
    if (side <= 0.0)
        side = real.layout.dims.side_km * 1000.0;
    real.deployment = deploy_hex(side, config.isd_m, center);
    for (Site &s : real.deployment.sites)
        s.height_m = site_height(real.layout, s.position, config.site_standoff_m, config.site_fallback_height_m);
    real.ues = drop_ues(real.layout, config.n_ues, real.seed);
    return real;
}

AntennaConfig bs_antenna(const RunConfig &config, const BandConfig &band, const Sector &sector)
{
    AntennaConfig a;
    a.geometry = band.bs_array;
    a.geometry.azimuth_deg = sector.azimuth_deg;
    a.geometry.tilt_deg = sector.tilt_deg;
    a.element = ElementPattern::sector(config.bs_element_gain_dbi, config.bs_element_hpbw_deg);
    return a;
}

AntennaConfig ue_antenna(const BandConfig &band, UeType type, double heading_deg)
{
    AntennaConfig a;
    a.geometry = band.ue_array;
    a.geometry.azimuth_deg = heading_deg;
    a.geometry.tilt_deg = 0.0;
    a.element = type == UeType::pedestrian ? ElementPattern::handgrip() : ElementPattern::isotropic();
    return a;
}

namespace
{

struct Combo
{
    BandConfig band;
    UeType ue_type;
    Interference mode;
};

/// Metrics of every UE of realization r for each combination.
std::vector<std::vector<MetricsRow>> run_realization(const RunConfig &config, std::span<const Combo> combos, int r,
                                                     int &n_sites)
{
    const Realization real = build_realization(config, r);
    const Deployment &dep = real.deployment;
    n_sites = static_cast<int>(dep.sites.size());
    const std::size_t n_ues = real.ues.positions.size();

    std::vector<Vec3> txs;
    for (const Site &s : dep.sites)
        txs.push_back(s.antenna());
    std::vector<Vec3> rxs;
    for (std::size_t k = 0; k < n_ues; ++k)
        rxs.push_back(real.ues.antenna(k));
    const auto geometry = find_paths(real.scene, txs, rxs, config.limits);

    std::vector<std::vector<MetricsRow>> out(combos.size());
    // group combinations by band: evaluated paths depend only on the carrier
    std::vector<std::vector<std::vector<Path>>> evaluated;
    double evaluated_for = -1.0;
    std::vector<ChannelMatrix> channels(dep.sectors.size());
    std::vector<Candidate> candidates;
    std::vector<Interferer> interferers;

    for (std::size_t c = 0; c < combos.size(); ++c)
    {
        const Combo &combo = combos[c];
        const BandConfig &band = combo.band;
        if (band.frequency_hz != evaluated_for)
        {
            evaluated.assign(dep.sites.size(), std::vector<std::vector<Path>>(n_ues));
            for (std::size_t s = 0; s < dep.sites.size(); ++s)
                for (std::size_t k = 0; k < n_ues; ++k)
                    evaluated[s][k] = evaluate_paths(geometry[s][k], real.scene, band.frequency_hz, config.limits);
            evaluated_for = band.frequency_hz;
        }
        const double sigma_n2 = config.noise_psd_w_per_hz * band.bandwidth_hz;
        const int n_t = band.bs_array.size();
        const double gamma_th = db_to_linear(config.coverage_threshold_db);

        for (std::size_t k = 0; k < n_ues; ++k)
        {
            const AntennaConfig ue = ue_antenna(band, combo.ue_type, real.ues.heading_deg[k]);
            candidates.clear();
            bool any = false;
            for (std::size_t j = 0; j < dep.sectors.size(); ++j)
            {
                const Sector &sec = dep.sectors[j];
                const auto &paths = evaluated[static_cast<std::size_t>(sec.site)][k];
                channels[j] = assemble_channel(paths, bs_antenna(config, band, sec), ue, band.frequency_hz);
                any = any || !paths.empty();
                candidates.push_back({static_cast<int>(j), &channels[j], config.tx_power_w, n_t});
            }

            UeMetrics m;
            m.ue_id = r * config.n_ues + static_cast<int>(k);
            m.x = real.ues.positions[k].x;
            m.y = real.ues.positions[k].y;
            if (any)
            {
                m.serving_bs = select_serving(candidates, sigma_n2);
                const ChannelMatrix &h = channels[static_cast<std::size_t>(m.serving_bs)];
                LinkBudget lb{config.tx_power_w, n_t, sigma_n2, 0.0};
                m.snr = snr(h, lb);
                if (combo.mode == Interference::full)
                {
                    // every sector of every other site within the radius; the serving
                    // site's own sectors are excluded
                    const int serving_site = dep.sectors[static_cast<std::size_t>(m.serving_bs)].site;
                    interferers.clear();
                    for (std::size_t j = 0; j < dep.sectors.size(); ++j)
                    {
                        const int site = dep.sectors[j].site;
                        if (site == serving_site)
                            continue;
                        if (config.interference_radius_m > 0.0 &&
                            distance(dep.sites[static_cast<std::size_t>(site)].position, real.ues.positions[k]) >
                                config.interference_radius_m)
                            continue;
                        interferers.push_back({&channels[j], config.tx_power_w, n_t});
                    }
                    lb.p_i_avg = interference_power(interferers, band.ue_array.size());
                }
                m.sinr = sinr(h, lb);
                m.rate_bps = rate(m.sinr, band);
                m.covered = m.sinr > gamma_th;
            }
            out[c].push_back({r, m});
        }
    }
    return out;
}

} // namespace

std::vector<RunResult> run_matrix(const RunConfig &base, std::span<const double> bands_hz,
                                  std::span<const UeType> ue_types, std::span<const Interference> modes)
{
    base.validate();
    std::vector<Combo> combos;
    std::vector<RunResult> results;
    for (double f : bands_hz)
    {
        BandConfig band = BandConfig::preset(f);
        if (band.frequency_hz == base.band.frequency_hz)
            band = base.band; // keep caller overrides of the configured band
        for (UeType u : ue_types)
            for (Interference i : modes)
            {
                combos.push_back({band, u, i});
                RunResult res;
                res.config = base;
                res.config.band = band;
                res.config.ue_type = u;
                res.config.interference = i;
                results.push_back(std::move(res));
            }
    }
    if (combos.empty())
        return results;

    const int n_real = base.n_realizations;
    std::vector<std::vector<std::vector<MetricsRow>>> per_real(static_cast<std::size_t>(n_real));
    std::vector<int> n_sites(static_cast<std::size_t>(n_real), 0);
    int workers = base.threads > 0 ? base.threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, n_real);

    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (int r = next++; r < n_real; r = next++)
        {
            try
            {
                per_real[static_cast<std::size_t>(r)] = run_realization(base, combos, r, n_sites[static_cast<std::size_t>(r)]);
            }
            catch (...)
            {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next = n_real;
            }
        }
    };
    if (workers == 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(worker);
        for (std::thread &t : pool)
            t.join();
    }
    if (error)
        std::rethrow_exception(error);

    for (std::size_t c = 0; c < combos.size(); ++c)
        for (const auto &real : per_real)
            results[c].rows.insert(results[c].rows.end(), real[c].begin(), real[c].end());
    for (RunResult &res : results)
        res.n_sites = n_sites.front();
    return results;
}

RunResult run(const RunConfig &config)
{
    const double f = config.band.frequency_hz;
    const UeType u = config.ue_type;
    const Interference i = config.interference;
    return std::move(run_matrix(config, std::span<const double>(&f, 1), std::span<const UeType>(&u, 1),
                                std::span<const Interference>(&i, 1))
                         .front());
}

} // namespace urbanrt
