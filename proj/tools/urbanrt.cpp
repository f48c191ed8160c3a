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
// Batch command-line front end: generate-city, trace-link, run, pattern-dump.

#include "urbanrt/antenna.hpp"
#include "urbanrt/config.hpp"
#include "urbanrt/io.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <system_error>

using namespace urbanrt;

namespace
{

// Exit statuses: 1 runtime failure, 2 invalid configuration or arguments.
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;

struct Options
{
    std::string config;
    std::string preset;
    std::string out_dir;
    std::string band;
    std::string interference;
    std::string ue_type;
    std::optional<std::uint64_t> seed;
    std::optional<int> realizations;
    std::optional<int> ues;
    std::optional<int> max_reflections;
    std::optional<int> threads;
};

void add_options(CLI::App *cmd, Options &o)
{
    cmd->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--preset", o.preset, "named configuration, e.g. highrise-8.2GHz-full or desk-suburban");
    cmd->add_option("--seed", o.seed, "base seed");
    cmd->add_option("--realizations", o.realizations, "number of city realizations");
    cmd->add_option("--ues", o.ues, "UEs per realization");
    cmd->add_option("--max-reflections", o.max_reflections, "reflection order limit");
    cmd->add_option("--out-dir", o.out_dir, "output directory");
    cmd->add_option("--interference", o.interference, "free or full");
    cmd->add_option("--ue-type", o.ue_type, "vehicular or pedestrian");
    cmd->add_option("--band", o.band, "carrier in GHz: 4.6, 8.2, 15 or 28");
    cmd->add_option("--threads", o.threads, "worker threads (0: all cores)");
}

ConfigFile resolve(const Options &o)
{
    RunConfig base;
    if (!o.preset.empty())
        base = preset(o.preset);
    ConfigFile file;
    file.run = base;
    if (!o.config.empty())
        file = parse_config(o.config, base);
    RunConfig &c = file.run;
    if (!o.band.empty())
    {
        double ghz = 0.0;
        std::istringstream in(o.band);
        in >> ghz;
        if (!in || !in.eof())
            throw ConfigError("--band: '" + o.band + "' is not a number; supported bands are 4.6, 8.2, 15 and 28 GHz");
        try
        {
            c.band = BandConfig::preset(ghz * 1e9);
        }
        catch (const UnsupportedBand &)
        {
            throw ConfigError("--band: unsupported band " + o.band + " GHz; supported bands are 4.6, 8.2, 15 and 28 GHz");
        }
    }
    try
    {
        if (!o.interference.empty())
            c.interference = interference_from_string(o.interference);
        if (!o.ue_type.empty())
            c.ue_type = ue_type_from_string(o.ue_type);
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(e.what());
    }
    if (o.seed)
        c.seed = *o.seed;
    if (o.realizations)
        c.n_realizations = *o.realizations;
    if (o.ues)
        c.n_ues = *o.ues;
    if (o.max_reflections)
        c.limits.max_reflections = *o.max_reflections;
    if (o.threads)
        c.threads = *o.threads;
    if (!o.out_dir.empty())
        file.output_dir = o.out_dir;
    try
    {
        c.validate();
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(e.what());
    }
    return file;
}

Vec3 parse_point(const std::string &s, const char *flag)
{
    Vec3 p;
    char c1 = 0;
    char c2 = 0;
    std::istringstream in(s);
    in >> p.x >> c1 >> p.y >> c2 >> p.z;
    if (!in || c1 != ',' || c2 != ',' || !(in >> std::ws).eof())
        throw ConfigError(std::string(flag) + ": expected x,y,z in metres, got '" + s + "'");
    return p;
}

// Creates `dir` when missing; returns true when this call created it.
bool ensure_dir(const std::filesystem::path &dir)
{
    if (std::filesystem::exists(dir))
        return false;
    std::filesystem::create_directories(dir);
    return true;
}

void remove_if_empty(const std::filesystem::path &dir)
{
    std::error_code ec;
    if (std::filesystem::is_directory(dir, ec) && std::filesystem::is_empty(dir, ec))
        std::filesystem::remove(dir, ec);
}

int cmd_generate_city(const Options &o, const std::string &output)
{
    const ConfigFile file = resolve(o);
    if (file.run.environment == Environment::imported)
        throw ConfigError("generate-city needs a statistical environment, not imported geometry");
    const Realization real = build_realization(file.run, 0);
    const std::filesystem::path path = output.empty() ? file.output_dir / "layout.json" : std::filesystem::path(output);
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    save_layout(real.layout, path);
    std::cout << "wrote " << path.string() << ": " << real.layout.buildings.size() << " buildings, "
              << real.layout.rows << "x" << real.layout.cols << " grid, seed " << real.layout.seed << "\n";
    return 0;
}

int cmd_trace_link(const Options &o, const std::string &tx_s, const std::string &rx_s, const std::string &layout_path,
                   int realization, bool channel)
{
    const ConfigFile file = resolve(o);
    const RunConfig &c = file.run;
    const Vec3 tx = parse_point(tx_s, "--tx");
    const Vec3 rx = parse_point(rx_s, "--rx");
    if (realization < 0)
        throw ConfigError("--realization must be non-negative");

    MaterialLibrary lib;
    for (const Material &m : c.materials)
        lib.set(m);
    Scene scene = layout_path.empty() ? build_realization(c, realization).scene
                                      : build_scene(load_layout(layout_path), lib, c.ground_material);
    const std::vector<Path> paths = trace_paths(scene, tx, rx, c.band.frequency_hz, c.limits);

    const bool created = ensure_dir(file.output_dir);
    std::vector<std::filesystem::path> written;
    try
    {
        const auto paths_csv = file.output_dir / "paths.csv";
        write_file_atomic(paths_csv, [&](std::ostream &out) { write_paths_csv(out, paths); });
        written.push_back(paths_csv);
        if (channel)
        {
            // sector facing the receiver, UE array facing the transmitter
            const double az = std::atan2(rx.y - tx.y, rx.x - tx.x) * 180.0 / std::numbers::pi;
            const AntennaConfig bs = bs_antenna(c, c.band, Sector{0, az, kSectorTiltDeg});
            const AntennaConfig ue = ue_antenna(c.band, c.ue_type, az + 180.0);
            const ChannelMatrix h = assemble_channel(paths, bs, ue, c.band.frequency_hz);
            const auto channel_csv = file.output_dir / "channel.csv";
            write_file_atomic(channel_csv, [&](std::ostream &out) { write_channel_csv(out, h); });
            written.push_back(channel_csv);
        }
    }
    catch (...)
    {
        std::error_code ec;
        for (const auto &p : written)
            std::filesystem::remove(p, ec);
        if (created)
            remove_if_empty(file.output_dir);
        throw;
    }
    double power = 0.0;
    for (const Path &p : paths)
        power += p.amp * p.amp;
    std::cout << paths.size() << " paths at " << c.band.frequency_hz / 1e9 << " GHz";
    if (power > 0.0)
        std::cout << ", path gain " << 10.0 * std::log10(power) << " dB";
    std::cout << "; wrote " << (file.output_dir / "paths.csv").string() << "\n";
    return 0;
}

int cmd_run(const Options &o)
{
    const ConfigFile file = resolve(o);
    const RunResult result = run(file.run);
    const bool created = ensure_dir(file.output_dir);
    try
    {
        write_run_outputs(file.output_dir, result);
    }
    catch (...)
    {
        if (created)
            remove_if_empty(file.output_dir);
        throw;
    }
    std::cout << to_string(result.config.environment) << " " << result.config.band.frequency_hz / 1e9 << " GHz "
              << to_string(result.config.ue_type) << " " << to_string(result.config.interference) << ": "
              << result.rows.size() << " UEs over " << result.config.n_realizations << " realizations, "
              << result.n_sites << " sites, coverage " << result.coverage() << ", median rate "
              << result.rate_quantile(0.5) / 1e6 << " Mb/s; wrote " << file.output_dir.string() << "\n";
    return 0;
}

void dump_cuts(std::ostream &out, const std::string &name, const std::function<double(AzEl)> &gain)
{
    char buf[128];
    for (int az = -180; az <= 180; ++az)
    {
        std::snprintf(buf, sizeof buf, "%s,azimuth,%d,%.6f\n", name.c_str(), az, gain({double(az), 0.0}));
        out << buf;
    }
    for (int el = -90; el <= 90; ++el)
    {
        std::snprintf(buf, sizeof buf, "%s,elevation,%d,%.6f\n", name.c_str(), el, gain({0.0, double(el)}));
        out << buf;
    }
}

Vec3 direction(AzEl a)
{
    const double az = a.az_deg * std::numbers::pi / 180.0;
    const double el = a.el_deg * std::numbers::pi / 180.0;
    return {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
}

int cmd_pattern_dump(const Options &o)
{
    const ConfigFile file = resolve(o);
    const RunConfig &c = file.run;
    const ElementPattern sector = ElementPattern::sector(c.bs_element_gain_dbi, c.bs_element_hpbw_deg);
    const ElementPattern handgrip = ElementPattern::handgrip();
    const ElementPattern iso = ElementPattern::isotropic();

    // arrays at zero azimuth and tilt, steered to boresight; angles are in the array frame
    AntennaConfig bs{c.band.bs_array, sector};
    bs.geometry.azimuth_deg = 0.0;
    bs.geometry.tilt_deg = 0.0;
    AntennaConfig ue{c.band.ue_array, c.ue_type == UeType::pedestrian ? handgrip : iso};
    ue.geometry.azimuth_deg = 0.0;
    ue.geometry.tilt_deg = 0.0;
    const double wl = 299792458.0 / c.band.frequency_hz;
    const Vec3 boresight{1.0, 0.0, 0.0};
    std::ostringstream label;
    label << c.band.frequency_hz / 1e9;

    const bool created = ensure_dir(file.output_dir);
    const auto path = file.output_dir / "patterns.csv";
    try
    {
        write_file_atomic(path, [&](std::ostream &out) {
            out << "pattern,cut,angle_deg,gain_dbi\n";
            dump_cuts(out, "bs_element", [&](AzEl a) { return sector.gain_dbi(a); });
            dump_cuts(out, "handgrip_element", [&](AzEl a) { return handgrip.gain_dbi(a); });
            dump_cuts(out, "isotropic_element", [&](AzEl a) { return iso.gain_dbi(a); });
            dump_cuts(out, "bs_array_" + label.str() + "GHz",
                      [&](AzEl a) { return array_gain_dbi(bs, boresight, direction(a), wl); });
            dump_cuts(out, "ue_array_" + label.str() + "GHz_" + to_string(c.ue_type),
                      [&](AzEl a) { return array_gain_dbi(ue, boresight, direction(a), wl); });
        });
    }
    catch (...)
    {
        if (created)
            remove_if_empty(file.output_dir);
        throw;
    }
    std::cout << "wrote " << path.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Ray-traced urban cellular link and system-level simulator"};
    app.require_subcommand(1);
    Options o;

    auto *gen = app.add_subcommand("generate-city", "generate one city layout and write it as JSON");
    add_options(gen, o);
    std::string layout_out;
    gen->add_option("--output", layout_out, "layout file (default <out-dir>/layout.json)");

    auto *trace = app.add_subcommand("trace-link", "trace one link and dump its paths");
    add_options(trace, o);
    std::string tx;
    std::string rx;
    std::string layout_in;
    int realization = 0;
    bool channel = false;
    trace->add_option("--tx", tx, "transmitter x,y,z (m)")->required();
    trace->add_option("--rx", rx, "receiver x,y,z (m)")->required();
    trace->add_option("--layout", layout_in, "layout JSON to trace in instead of a generated city")
        ->check(CLI::ExistingFile);
    trace->add_option("--realization", realization, "realization whose city is traced");
    trace->add_flag("--channel", channel, "also write the MIMO channel taps");

    auto *run_cmd = app.add_subcommand("run", "run the system-level simulation and write metrics");
    add_options(run_cmd, o);

    auto *pat = app.add_subcommand("pattern-dump", "write element and array gain cuts as CSV");
    add_options(pat, o);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e);
    }

    try
    {
        if (gen->parsed())
            return cmd_generate_city(o, layout_out);
        if (trace->parsed())
            return cmd_trace_link(o, tx, rx, layout_in, realization, channel);
        if (run_cmd->parsed())
            return cmd_run(o);
        if (pat->parsed())
            return cmd_pattern_dump(o);
    }
    catch (const ConfigError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}
