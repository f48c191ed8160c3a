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

#include "urbanrt/io.hpp"
#include "urbanrt/scenario.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace urbanrt
{

/// Configuration problem; the message names the offending key or the line and column.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A parsed configuration file: the run itself plus where to write its results.
struct ConfigFile
{
    RunConfig run;
    std::filesystem::path output_dir = "urbanrt-out";
};

/// Named configurations:
///   <env>                       full-scale city statistics (suburban, urban, highrise)
///   <env>-<f>GHz-<free|full>    plus band and interference mode, e.g. highrise-8.2GHz-full
///   desk-<env>[-<f>GHz-<mode>]  desk scale: ~0.8 km city, 100 UEs, 3 realizations, order 2
RunConfig preset(const std::string &name);
std::vector<std::string> preset_names();

/// Resolves a JSON document over `base` (or over its "preset" key when present). Unknown
/// keys and out-of-range values raise ConfigError naming the key.
RunConfig config_from_json(const nlohmann::json &j, const RunConfig &base = RunConfig{});
nlohmann::json config_to_json(const RunConfig &config);

/// Reads a JSON config file resolved over `base`; an empty file yields `base` unchanged.
ConfigFile parse_config(const std::filesystem::path &path, const RunConfig &base = RunConfig{});
/// Same, from text; `origin` prefixes error messages.
ConfigFile parse_config_text(const std::string &text, const std::string &origin = "<config>",
                             const RunConfig &base = RunConfig{});

/// Run manifest: resolved config, per-realization seeds and deployment notes.
nlohmann::json make_manifest(const RunResult &result);
/// Config stored in a manifest.
RunConfig config_from_manifest(const nlohmann::json &manifest);

void write_metrics_csv(std::ostream &out, const RunResult &result);
void write_rate_cdf_csv(std::ostream &out, const RunResult &result);
void write_coverage_summary_csv(std::ostream &out, std::span<const RunResult> results);
/// One row per path: interactions, length, delay, amplitude, phase, AoD and AoA.
void write_paths_csv(std::ostream &out, std::span<const Path> paths);

/// Writes metrics.csv, rate_cdf.csv, coverage_summary.csv and manifest.json into `dir`.
/// On failure every file this call created is removed before the exception propagates.
std::vector<std::filesystem::path> write_run_outputs(const std::filesystem::path &dir, const RunResult &result);

} // namespace urbanrt
