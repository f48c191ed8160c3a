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
#include "urbanrt/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <system_error>

namespace urbanrt
{

using nlohmann::json;

namespace
{

struct EnvPreset
{
    const char *name;
    Environment env;
    ItuParams city;
    int desk_buildings; // perfect square, ~0.8 km side
};

const EnvPreset kEnvPresets[] = {
    {"suburban", Environment::suburban, ItuParams::suburban(), 484},
    {"urban", Environment::urban, ItuParams::urban(), 324},
    {"highrise", Environment::highrise, ItuParams::highrise(), 196},
};

const char *kBandLabels[] = {"4.6", "8.2", "15", "28"};

std::string band_label(double frequency_hz)
{
    return kBandLabels[band_index(frequency_hz)];
}

std::string supported_bands_text()
{
    return "supported bands are 4.6, 8.2, 15 and 28 GHz";
}

BandConfig band_from_ghz(double ghz, const std::string &key)
{
    try
    {
        return BandConfig::preset(ghz * 1e9);
    }
    catch (const UnsupportedBand &)
    {
        std::ostringstream os;
        os << key << ": unsupported band " << ghz << " GHz; " << supported_bands_text();
        throw ConfigError(os.str());
    }
}

std::string search_to_string(SearchMode m)
{
    switch (m)
    {
    case SearchMode::automatic:
        return "automatic";
    case SearchMode::exhaustive:
        return "exhaustive";
    case SearchMode::launch:
        return "launch";
    }
    return "automatic";
}

SearchMode search_from_string(const std::string &s)
{
    if (s == "automatic")
        return SearchMode::automatic;
    if (s == "exhaustive")
        return SearchMode::exhaustive;
    if (s == "launch")
        return SearchMode::launch;
    throw std::invalid_argument("unknown search mode '" + s + "' (expected automatic, exhaustive or launch)");
}

// Walks one JSON object, tracking which keys were consumed so leftovers can be rejected.
class Reader
{
  public:
    Reader(const json &j, std::string prefix) : j_(j), prefix_(std::move(prefix))
    {
        if (!j_.is_object())
            throw ConfigError((prefix_.empty() ? std::string("config") : prefix_) + ": expected a JSON object");
    }

    std::string key(const std::string &k) const { return prefix_.empty() ? k : prefix_ + "." + k; }

    const json *find(const std::string &k)
    {
        seen_.insert(k);
        auto it = j_.find(k);
        return it == j_.end() ? nullptr : &*it;
    }

    bool has(const std::string &k) const { return j_.contains(k); }

    bool number(const std::string &k, double &dst)
    {
        const json *v = find(k);
        if (!v)
            return false;
        if (!v->is_number())
            throw ConfigError(key(k) + ": expected a number");
        dst = v->get<double>();
        if (!std::isfinite(dst))
            throw ConfigError(key(k) + ": must be finite");
        return true;
    }

    bool integer(const std::string &k, int &dst)
    {
        const json *v = find(k);
        if (!v)
            return false;
        if (!v->is_number_integer())
            throw ConfigError(key(k) + ": expected an integer");
        const auto x = v->get<long long>();
        if (x < -2147483647LL || x > 2147483647LL)
            throw ConfigError(key(k) + ": out of range");
        dst = static_cast<int>(x);
        return true;
    }

    bool seed(const std::string &k, std::uint64_t &dst)
    {
        const json *v = find(k);
        if (!v)
            return false;
        if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0))
            throw ConfigError(key(k) + ": expected a non-negative integer");
        dst = v->get<std::uint64_t>();
        return true;
    }

    bool string(const std::string &k, std::string &dst)
    {
        const json *v = find(k);
        if (!v)
            return false;
        if (!v->is_string())
            throw ConfigError(key(k) + ": expected a string");
        dst = v->get<std::string>();
        return true;
    }

    template <class T, class Parse> bool parsed(const std::string &k, T &dst, Parse parse)
    {
        std::string s;
        if (!string(k, s))
            return false;
        try
        {
            dst = parse(s);
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(key(k) + ": " + e.what());
        }
        return true;
    }

    void finish() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key()))
                throw ConfigError(key(it.key()) + ": unknown key");
    }

  private:
    const json &j_;
    std::string prefix_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string &key, const std::string &what)
{
    if (!ok)
        throw ConfigError(key + ": " + what);
}

void read_array(Reader &parent, const std::string &k, ArrayGeometry &g)
{
    const json *v = parent.find(k);
    if (!v)
        return;
    Reader r(*v, parent.key(k));
    r.parsed("kind", g.kind, [](const std::string &s) {
        if (s == "ura")
            return ArrayKind::ura;
        if (s == "ula")
            return ArrayKind::ula;
        throw std::invalid_argument("expected ura or ula");
    });
    if (r.integer("rows", g.rows))
        require(g.rows >= 1, r.key("rows"), "must be at least 1");
    if (r.integer("cols", g.cols))
        require(g.cols >= 1, r.key("cols"), "must be at least 1");
    if (r.number("spacing_wl", g.spacing_wl))
        require(g.spacing_wl > 0.0, r.key("spacing_wl"), "must be positive");
    r.finish();
}

Material read_material(const json &j, const std::string &prefix)
{
    Reader r(j, prefix);
    Material m;
    require(r.string("name", m.name) && !m.name.empty(), r.key("name"), "required non-empty string");
    require(r.number("epsr", m.epsr), r.key("epsr"), "required");
    require(m.epsr >= 1.0, r.key("epsr"), "must be at least 1");
    const json *s = r.find("sigma_s_per_m");
    require(s && s->is_array() && s->size() == 4, r.key("sigma_s_per_m"),
            "expected 4 conductivities at 4.6, 8.2, 15 and 28 GHz");
    for (std::size_t i = 0; i < 4; ++i)
    {
        require((*s)[i].is_number(), r.key("sigma_s_per_m"), "expected numbers");
        m.sigma_s_per_m[i] = (*s)[i].get<double>();
        require(m.sigma_s_per_m[i] >= 0.0, r.key("sigma_s_per_m"), "must be non-negative");
    }
    if (r.number("thickness_m", m.thickness_m))
        require(m.thickness_m > 0.0, r.key("thickness_m"), "must be positive");
    r.finish();
    return m;
}

void read_trace(Reader &parent, TraceLimits &t)
{
    const json *v = parent.find("trace");
    if (!v)
        return;
    Reader r(*v, "trace");
    if (r.integer("max_reflections", t.max_reflections))
        require(t.max_reflections >= 0, r.key("max_reflections"), "must be non-negative");
    if (r.integer("max_diffractions", t.max_diffractions))
        require(t.max_diffractions >= 0 && t.max_diffractions <= 1, r.key("max_diffractions"), "must be 0 or 1");
    if (r.integer("max_transmissions", t.max_transmissions))
        require(t.max_transmissions >= 0, r.key("max_transmissions"), "must be non-negative");
    if (r.integer("max_paths", t.max_paths))
        require(t.max_paths >= 1, r.key("max_paths"), "must be at least 1");
    r.number("power_floor_dbm", t.power_floor_dbm);
    r.number("reference_power_dbm", t.reference_power_dbm);
    if (r.integer("launch_rays", t.launch_rays))
        require(t.launch_rays >= 1, r.key("launch_rays"), "must be at least 1");
    if (r.integer("probe_rays", t.probe_rays))
        require(t.probe_rays >= 0, r.key("probe_rays"), "must be non-negative");
    r.parsed("search", t.search, search_from_string);
    if (r.integer("exhaustive_face_limit", t.exhaustive_face_limit))
        require(t.exhaustive_face_limit >= 0, r.key("exhaustive_face_limit"), "must be non-negative");
    r.finish();
}

const EnvPreset *env_preset(Environment e)
{
    for (const EnvPreset &p : kEnvPresets)
        if (p.env == e)
            return &p;
    return nullptr;
}

std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;)
    {
        const std::size_t pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos)
            return parts;
        start = pos + 1;
    }
}

// Formats a double for CSV output; identical inputs give identical bytes.
std::string num(double x, int decimals = 6)
{
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    if (std::isnan(x))
        return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    return buf;
}

std::string db(double linear)
{
    return num(linear > 0.0 ? linear_to_db(linear) : -INFINITY);
}

std::pair<int, int> line_column(const std::string &text, std::size_t byte)
{
    int line = 1;
    int col = 1;
    const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i)
    {
        if (text[i] == '\n')
        {
            ++line;
            col = 1;
        }
        else
            ++col;
    }
    return {line, col};
}

RunConfig resolve(const json &j, const RunConfig &base, std::filesystem::path *output_dir)
{
    Reader r(j, "");
    RunConfig c = base;

    std::string name;
    if (r.string("preset", name))
    {
        try
        {
            c = preset(name);
        }
        catch (const ConfigError &e)
        {
            throw ConfigError(std::string("preset: ") + e.what());
        }
    }

    Environment env = c.environment;
    if (r.parsed("environment", env, environment_from_string) && env != c.environment)
    {
        c.environment = env;
        if (const EnvPreset *p = env_preset(env))
            c.city = p->city;
    }

    if (const json *v = r.find("city"))
    {
        Reader cr(*v, "city");
        if (cr.number("alpha0", c.city.alpha0))
            require(c.city.alpha0 > 0.0 && c.city.alpha0 < 1.0, cr.key("alpha0"), "must lie in (0, 1)");
        if (cr.number("beta0_per_km2", c.city.beta0))
            require(c.city.beta0 > 0.0, cr.key("beta0_per_km2"), "must be positive");
        if (cr.number("gamma0_m", c.city.gamma0))
            require(c.city.gamma0 > 0.0, cr.key("gamma0_m"), "must be positive");
        if (cr.integer("n_buildings", c.city.n_buildings))
            require(c.city.n_buildings >= 1, cr.key("n_buildings"), "must be at least 1");
        cr.finish();
    }

    if (const json *v = r.find("materials"))
    {
        require(v->is_array(), "materials", "expected an array");
        std::vector<Material> ms;
        for (std::size_t i = 0; i < v->size(); ++i)
            ms.push_back(read_material((*v)[i], "materials[" + std::to_string(i) + "]"));
        c.materials = std::move(ms);
    }
    MaterialLibrary lib;
    for (const Material &m : c.materials)
        lib.set(m);
    auto known_material = [&](const std::string &key, const std::string &m) {
        require(lib.contains(m), key, "unknown material '" + m + "'");
    };
    if (r.string("building_material", c.building_material))
        known_material("building_material", c.building_material);
    if (r.string("ground_material", c.ground_material))
        known_material("ground_material", c.ground_material);
    if (const json *v = r.find("building_materials"))
    {
        require(v->is_object(), "building_materials", "expected an object of index -> material");
        std::map<int, std::string> overrides;
        for (auto it = v->begin(); it != v->end(); ++it)
        {
            const std::string key = "building_materials." + it.key();
            int index = -1;
            try
            {
                std::size_t used = 0;
                index = std::stoi(it.key(), &used);
                require(used == it.key().size(), key, "building index must be an integer");
            }
            catch (const std::logic_error &)
            {
                throw ConfigError(key + ": building index must be an integer");
            }
            require(index >= 0, key, "building index must be non-negative");
            require(it->is_string(), key, "expected a material name");
            known_material(key, it->get<std::string>());
            overrides[index] = it->get<std::string>();
        }
        c.building_materials = std::move(overrides);
    }
    std::string geometry;
    if (r.string("geometry_path", geometry))
        c.geometry_path = geometry;

    double ghz = 0.0;
    if (r.number("band_ghz", ghz))
        c.band = band_from_ghz(ghz, "band_ghz");
    double bw = 0.0;
    require(!(r.has("bandwidth_mhz") && r.has("bandwidth_hz")), "bandwidth_mhz",
            "give either bandwidth_mhz or bandwidth_hz");
    if (r.number("bandwidth_mhz", bw))
    {
        require(bw > 0.0, "bandwidth_mhz", "must be positive");
        c.band.bandwidth_hz = bw * 1e6;
    }
    if (r.number("bandwidth_hz", bw))
    {
        require(bw > 0.0, "bandwidth_hz", "must be positive");
        c.band.bandwidth_hz = bw;
    }
    if (r.number("alpha", c.band.alpha))
        require(c.band.alpha > 0.0 && c.band.alpha <= 1.0, "alpha", "must lie in (0, 1]");
    if (r.number("rho_max_bps_per_hz", c.band.rho_max))
        require(c.band.rho_max > 0.0, "rho_max_bps_per_hz", "must be positive");
    read_array(r, "bs_array", c.band.bs_array);
    read_array(r, "ue_array", c.band.ue_array);

    r.parsed("interference", c.interference, interference_from_string);
    r.parsed("ue_type", c.ue_type, ue_type_from_string);
    if (r.integer("realizations", c.n_realizations))
        require(c.n_realizations >= 1, "realizations", "must be at least 1");
    if (r.integer("ues", c.n_ues))
        require(c.n_ues >= 1, "ues", "must be at least 1");
    r.seed("seed", c.seed);

    if (r.number("isd_m", c.isd_m))
        require(c.isd_m > 0.0, "isd_m", "must be positive");
    if (r.number("area_side_m", c.area_side_m))
        require(c.area_side_m >= 0.0, "area_side_m", "must be non-negative");
    if (r.number("site_standoff_m", c.site_standoff_m))
        require(c.site_standoff_m >= 0.0, "site_standoff_m", "must be non-negative");
    if (r.number("site_fallback_height_m", c.site_fallback_height_m))
        require(c.site_fallback_height_m > 0.0, "site_fallback_height_m", "must be positive");
    if (r.number("tx_power_w", c.tx_power_w))
        require(c.tx_power_w > 0.0, "tx_power_w", "must be positive");
    r.number("bs_element_gain_dbi", c.bs_element_gain_dbi);
    if (r.number("bs_element_hpbw_deg", c.bs_element_hpbw_deg))
        require(c.bs_element_hpbw_deg > 0.0 && c.bs_element_hpbw_deg < 360.0, "bs_element_hpbw_deg",
                "must lie in (0, 360)");
    if (r.number("noise_psd_a2_per_hz", c.noise_psd_w_per_hz))
        require(c.noise_psd_w_per_hz > 0.0, "noise_psd_a2_per_hz", "must be positive");
    r.number("coverage_threshold_db", c.coverage_threshold_db);
    if (r.number("interference_radius_m", c.interference_radius_m))
        require(c.interference_radius_m >= 0.0, "interference_radius_m", "must be non-negative (0 keeps every site)");
    read_trace(r, c.limits);
    if (r.integer("threads", c.threads))
        require(c.threads >= 0, "threads", "must be non-negative");

    std::string out;
    if (output_dir)
    {
        if (r.string("output_dir", out))
        {
            require(!out.empty(), "output_dir", "must not be empty");
            *output_dir = out;
        }
    }
    r.finish();

    if (c.environment == Environment::imported)
        require(!c.geometry_path.empty(), "geometry_path", "required for the imported environment");
    try
    {
        c.validate();
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(e.what());
    }
    return c;
}

json array_to_json(const ArrayGeometry &g)
{
    return {{"kind", g.kind == ArrayKind::ura ? "ura" : "ula"},
            {"rows", g.rows},
            {"cols", g.cols},
            {"spacing_wl", g.spacing_wl}};
}

} // namespace

RunConfig preset(const std::string &name)
{
    std::vector<std::string> parts = split(name, '-');
    RunConfig c;
    bool desk = false;
    if (!parts.empty() && parts.front() == "desk")
    {
        desk = true;
        parts.erase(parts.begin());
    }
    const EnvPreset *env = nullptr;
    if (!parts.empty())
        for (const EnvPreset &p : kEnvPresets)
            if (parts.front() == p.name)
                env = &p;
    if (!env || (parts.size() != 1 && parts.size() != 3))
        throw ConfigError("unknown preset '" + name + "' (expected [desk-]<suburban|urban|highrise>[-<f>GHz-<free|full>])");

    c.environment = env->env;
    c.city = env->city;
    if (parts.size() == 3)
    {
        const std::string &f = parts[1];
        if (f.size() < 4 || f.substr(f.size() - 3) != "GHz")
            throw ConfigError("unknown preset '" + name + "': band must read like 8.2GHz");
        const std::string label = f.substr(0, f.size() - 3);
        int b = -1;
        for (int i = 0; i < 4; ++i)
            if (label == kBandLabels[i])
                b = i;
        if (b < 0)
            throw ConfigError("unknown preset '" + name + "': " + supported_bands_text());
        c.band = BandConfig::preset(kSupportedBandsGhz[b] * 1e9);
        try
        {
            c.interference = interference_from_string(parts[2]);
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError("unknown preset '" + name + "': " + e.what());
        }
    }
    if (desk)
    {
        c.city.n_buildings = env->desk_buildings;
        c.n_ues = 100;
        c.n_realizations = 3;
        c.limits.max_reflections = 2;
    }
    return c;
}

std::vector<std::string> preset_names()
{
    std::vector<std::string> names;
    for (const char *prefix : {"", "desk-"})
        for (const EnvPreset &p : kEnvPresets)
        {
            names.push_back(std::string(prefix) + p.name);
            for (const char *band : kBandLabels)
                for (const char *mode : {"free", "full"})
                    names.push_back(std::string(prefix) + p.name + "-" + band + "GHz-" + mode);
        }
    return names;
}

RunConfig config_from_json(const json &j, const RunConfig &base)
{
    return resolve(j, base, nullptr);
}

json config_to_json(const RunConfig &c)
{
    json materials = json::array();
    for (const Material &m : c.materials)
        materials.push_back({{"name", m.name},
                             {"epsr", m.epsr},
                             {"sigma_s_per_m", m.sigma_s_per_m},
                             {"thickness_m", m.thickness_m}});
    json overrides = json::object();
    for (const auto &[index, m] : c.building_materials)
        overrides[std::to_string(index)] = m;
    const TraceLimits &t = c.limits;
    return {
        {"environment", to_string(c.environment)},
        {"city",
         {{"alpha0", c.city.alpha0},
          {"beta0_per_km2", c.city.beta0},
          {"gamma0_m", c.city.gamma0},
          {"n_buildings", c.city.n_buildings}}},
        {"building_material", c.building_material},
        {"building_materials", overrides},
        {"ground_material", c.ground_material},
        {"materials", materials},
        {"geometry_path", c.geometry_path.string()},
        {"band_ghz", std::stod(band_label(c.band.frequency_hz))},
        {"bandwidth_hz", c.band.bandwidth_hz},
        {"alpha", c.band.alpha},
        {"rho_max_bps_per_hz", c.band.rho_max},
        {"bs_array", array_to_json(c.band.bs_array)},
        {"ue_array", array_to_json(c.band.ue_array)},
        {"interference", to_string(c.interference)},
        {"ue_type", to_string(c.ue_type)},
        {"realizations", c.n_realizations},
        {"ues", c.n_ues},
        {"seed", c.seed},
        {"isd_m", c.isd_m},
        {"area_side_m", c.area_side_m},
        {"site_standoff_m", c.site_standoff_m},
        {"site_fallback_height_m", c.site_fallback_height_m},
        {"tx_power_w", c.tx_power_w},
        {"bs_element_gain_dbi", c.bs_element_gain_dbi},
        {"bs_element_hpbw_deg", c.bs_element_hpbw_deg},
        {"noise_psd_a2_per_hz", c.noise_psd_w_per_hz},
        {"coverage_threshold_db", c.coverage_threshold_db},
        {"interference_radius_m", c.interference_radius_m},
        {"trace",
         {{"max_reflections", t.max_reflections},
          {"max_diffractions", t.max_diffractions},
          {"max_transmissions", t.max_transmissions},
          {"max_paths", t.max_paths},
          {"power_floor_dbm", t.power_floor_dbm},
          {"reference_power_dbm", t.reference_power_dbm},
          {"launch_rays", t.launch_rays},
          {"probe_rays", t.probe_rays},
          {"search", search_to_string(t.search)},
          {"exhaustive_face_limit", t.exhaustive_face_limit}}},
        {"threads", c.threads},
    };
}

ConfigFile parse_config_text(const std::string &text, const std::string &origin, const RunConfig &base)
{
    ConfigFile file;
    file.run = base;
    const bool blank = std::all_of(text.begin(), text.end(), [](unsigned char ch) { return std::isspace(ch); });
    if (blank)
        return file;
    json j;
    try
    {
        j = json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        const auto [line, col] = line_column(text, e.byte);
        std::string what = e.what();
        const std::size_t colon = what.find(": ", what.find("parse error"));
        throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON" +
                          (colon == std::string::npos ? std::string() : what.substr(colon)));
    }
    try
    {
        file.run = resolve(j, base, &file.output_dir);
    }
    catch (const ConfigError &e)
    {
        throw ConfigError(origin + ": " + e.what());
    }
    return file;
}

ConfigFile parse_config(const std::filesystem::path &path, const RunConfig &base)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(path.string() + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path.string(), base);
}

json make_manifest(const RunResult &result)
{
    const RunConfig &c = result.config;
    json seeds = json::array();
    for (int r = 0; r < c.n_realizations; ++r)
        seeds.push_back(c.realization_seed(r));
    json summary = {{"n_ues", result.rows.size()}, {"rate_cap_bps", c.band.rate_cap()}};
    if (!result.rows.empty())
    {
        const std::vector<double> rates = result.rates();
        summary["coverage_fraction"] = result.coverage();
        summary["median_rate_bps"] = result.rate_quantile(0.5);
        summary["p10_rate_bps"] = result.rate_quantile(0.1);
        summary["max_rate_bps"] = *std::max_element(rates.begin(), rates.end());
    }
    return {
        {"format", "urbanrt-run-manifest"},
        {"version", 1},
        {"config", config_to_json(c)},
        {"realization_seeds", seeds},
        {"seed_rule", "seed_r = seed + r; city and UE drop of realization r share seed_r"},
        {"n_sites", result.n_sites},
        {"n_sectors", 3 * result.n_sites},
        {"notes",
         {"hexagonal site grid is clipped at the deployment area boundary (no wrap-around); edge sites see fewer "
          "interferers"}},
        {"summary", summary},
    };
}

RunConfig config_from_manifest(const json &manifest)
{
    if (!manifest.is_object() || !manifest.contains("config"))
        throw ConfigError("manifest: missing config");
    try
    {
        return config_from_json(manifest.at("config"));
    }
    catch (const ConfigError &e)
    {
        throw ConfigError(std::string("manifest: ") + e.what());
    }
}

void write_metrics_csv(std::ostream &out, const RunResult &result)
{
    out << "realization,ue_id,x,y,serving_bs,snr_db,sinr_db,rate_mbps,covered\n";
    std::vector<MetricsRow> rows = result.rows;
    std::sort(rows.begin(), rows.end(), [](const MetricsRow &a, const MetricsRow &b) {
        return std::pair(a.realization, a.metrics.ue_id) < std::pair(b.realization, b.metrics.ue_id);
    });
    for (const MetricsRow &row : rows)
    {
        const UeMetrics &m = row.metrics;
        out << row.realization << ',' << m.ue_id << ',' << num(m.x, 3) << ',' << num(m.y, 3) << ',' << m.serving_bs
            << ',' << db(m.snr) << ',' << db(m.sinr) << ',' << num(m.rate_bps / 1e6) << ',' << (m.covered ? 1 : 0)
            << '\n';
    }
}

void write_rate_cdf_csv(std::ostream &out, const RunResult &result)
{
    out << "rate_mbps,cdf\n";
    if (result.rows.empty())
        return;
    for (const CdfPoint &p : aggregate_cdf(result.rates()))
        out << num(p.value / 1e6) << ',' << num(p.fraction, 9) << '\n';
}

void write_coverage_summary_csv(std::ostream &out, std::span<const RunResult> results)
{
    out << "band,ue_type,interference,coverage_fraction\n";
    for (const RunResult &r : results)
        out << band_label(r.config.band.frequency_hz) << ',' << to_string(r.config.ue_type) << ','
            << to_string(r.config.interference) << ',' << num(r.rows.empty() ? 0.0 : r.coverage(), 9) << '\n';
}

void write_paths_csv(std::ostream &out, std::span<const Path> paths)
{
    out << "path,interactions,length_m,delay_ns,amp_db,phase_deg,aod_az_deg,aod_el_deg,aoa_az_deg,aoa_el_deg\n";
    for (std::size_t i = 0; i < paths.size(); ++i)
    {
        const Path &p = paths[i];
        const AzEl d = p.aod();
        const AzEl a = p.aoa();
        out << i << ',' << p.signature() << ',' << num(p.length_m, 9) << ',' << num(p.delay_s * 1e9, 6) << ','
            << num(p.amp > 0.0 ? 20.0 * std::log10(p.amp) : -INFINITY) << ','
            << num(p.phase_rad * 180.0 / std::numbers::pi) << ',' << num(d.az_deg) << ',' << num(d.el_deg) << ','
            << num(a.az_deg) << ',' << num(a.el_deg) << '\n';
    }
}

std::vector<std::filesystem::path> write_run_outputs(const std::filesystem::path &dir, const RunResult &result)
{
    std::vector<std::filesystem::path> written;
    try
    {
        std::filesystem::create_directories(dir);
        auto emit = [&](const char *name, const std::function<void(std::ostream &)> &writer) {
            const std::filesystem::path p = dir / name;
            write_file_atomic(p, writer);
            written.push_back(p);
        };
        emit("metrics.csv", [&](std::ostream &o) { write_metrics_csv(o, result); });
        emit("rate_cdf.csv", [&](std::ostream &o) { write_rate_cdf_csv(o, result); });
        emit("coverage_summary.csv",
             [&](std::ostream &o) { write_coverage_summary_csv(o, std::span<const RunResult>(&result, 1)); });
        const std::string manifest = make_manifest(result).dump(2);
        emit("manifest.json", [&](std::ostream &o) { o << manifest << '\n'; });
    }
    catch (...)
    {
        std::error_code ec;
        for (const std::filesystem::path &p : written)
            std::filesystem::remove(p, ec);
        throw;
    }
    return written;
}

} // namespace urbanrt
