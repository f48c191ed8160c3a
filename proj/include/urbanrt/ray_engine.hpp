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
#include "urbanrt/propagation.hpp"
#include "urbanrt/scene.hpp"

#include <span>
#include <string>
#include <vector>

namespace urbanrt
{

/// How candidate interaction chains are generated before exact image-method solving.
enum class SearchMode
{
    /// Exhaustive image trees for scenes of at most exhaustive_face_limit faces, rays otherwise.
    automatic,
    exhaustive,
    launch,
};

struct TraceLimits
{
    int max_reflections = 3;
    int max_diffractions = 1;
    int max_transmissions = 1;
    int max_paths = 25;
    double power_floor_dbm = -250.0;
    /// Isotropic transmit power used when applying the floor.
    double reference_power_dbm = 30.0;
    /// Rays launched from the transmitter to discover reflection and diffraction candidates.
    int launch_rays = 100000;
    /// Rays launched from each receiver to discover receiver-side diffraction chains.
    int probe_rays = 20000;
    SearchMode search = SearchMode::automatic;
    int exhaustive_face_limit = 256;

    void validate() const;
    friend bool operator==(const TraceLimits &, const TraceLimits &) = default;
};

enum class InteractionKind
{
    reflect,
    diffract,
    transmit,
};

struct Interaction
{
    InteractionKind kind = InteractionKind::reflect;
    Vec3 point;
    /// Face index for reflect/transmit, edge index for diffract.
    int index = -1;
    /// Reflect/transmit: incidence angle from the face normal (rad) and field component.
    double incidence_rad = 0.0;
    Polarization pol = Polarization::tm;
    /// Diffract: clearance of the edge over the unfolded line of sight and the unfolded
    /// distances to either side (m).
    double clearance_m = 0.0;
    double d1_m = 0.0;
    double d2_m = 0.0;
};

/// One multipath component. Geometry is frequency independent; amp/phase/delay are the
/// field terms at the frequency the path was evaluated for.
struct Path
{
    std::vector<Interaction> interactions;
    double length_m = 0.0;
    /// Unit vectors pointing from the transmitter towards the first hop and from the
    /// receiver towards the last hop.
    Vec3 departure;
    Vec3 arrival;
    double amp = 0.0;
    double phase_rad = 0.0;
    double delay_s = 0.0;

    AzEl aod() const { return to_azel(departure); }
    AzEl aoa() const { return to_azel(arrival); }
    int count(InteractionKind k) const;
    /// Interaction string such as "R", "RD" or "RTR"; "direct" for an unobstructed ray.
    std::string signature() const;
};

struct PathField
{
    double amp = 0.0;
    double phase_rad = 0.0;
    double delay_s = 0.0;
};

/// Field terms of a traced path at frequency f: free-space spreading over the unfolded
/// length times the interaction coefficients.
PathField path_field(const Path &path, const Scene &scene, double frequency_hz);

/// Valid geometric paths between tx and rx within the interaction limits, unsorted and
/// without field terms. Independent of frequency, so one search serves all bands.
///
/// Candidate chains come either from exhaustive image trees pruned by reflection beams
/// (complete) or, for scenes too large for that, from rays launched over a Fibonacci
/// sphere: chains received within a cone of one ray spacing and edges of every face a ray
/// hits. Each candidate is solved exactly with image sources and checked for obstruction,
/// so every returned path is exact; in launch mode a path can be missed when no ray passes
/// near it.
std::vector<Path> find_paths(const Scene &scene, Vec3 tx, Vec3 rx, const TraceLimits &limits);

/// Same search for many receivers sharing one transmitter; rays from tx are launched once.
std::vector<std::vector<Path>> find_paths(const Scene &scene, Vec3 tx, std::span<const Vec3> rxs,
                                          const TraceLimits &limits);

/// Paths for every (tx, rx) pair, indexed [tx][rx]. Receiver-side rays are launched once
/// per receiver and shared by all transmitters.
std::vector<std::vector<std::vector<Path>>> find_paths(const Scene &scene, std::span<const Vec3> txs,
                                                       std::span<const Vec3> rxs, const TraceLimits &limits);

/// Unit directions on a Fibonacci sphere.
std::vector<Vec3> fibonacci_sphere(int n);

/// Fills in field terms, drops paths below the power floor, sorts by descending power and
/// keeps at most max_paths.
std::vector<Path> evaluate_paths(std::vector<Path> paths, const Scene &scene, double frequency_hz,
                                 const TraceLimits &limits);

std::vector<Path> trace_paths(const Scene &scene, Vec3 tx, Vec3 rx, double frequency_hz, const TraceLimits &limits);

} // namespace urbanrt
