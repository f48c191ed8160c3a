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
#include "urbanrt/ray_engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <stdexcept>

namespace urbanrt
{

void TraceLimits::validate() const
{
    if (max_reflections < 0 || max_diffractions < 0 || max_transmissions < 0)
        throw std::invalid_argument("interaction limits must be non-negative");
    if (max_diffractions > 1)
        throw std::invalid_argument("at most one diffraction per path is supported");
    if (max_paths < 1)
        throw std::invalid_argument("max_paths must be at least 1");
    if (launch_rays < 1 || probe_rays < 1)
        throw std::invalid_argument("ray counts must be positive");
    if (exhaustive_face_limit < 0)
        throw std::invalid_argument("exhaustive_face_limit must be non-negative");
}

int Path::count(InteractionKind k) const
{
    return static_cast<int>(std::count_if(interactions.begin(), interactions.end(),
                                          [k](const Interaction &i) { return i.kind == k; }));
}

std::string Path::signature() const
{
    if (interactions.empty())
        return "direct";
    std::string s;
    for (const Interaction &i : interactions)
        s += i.kind == InteractionKind::reflect ? 'R' : (i.kind == InteractionKind::diffract ? 'D' : 'T');
    return s;
}

PathField path_field(const Path &path, const Scene &scene, double frequency_hz)
{
    const double lambda = wavelength(frequency_hz);
    double amp = lambda / (4.0 * kPi * path.length_m);
    double phase = -2.0 * kPi * path.length_m / lambda;
    for (const Interaction &i : path.interactions)
    {
        switch (i.kind)
        {
        case InteractionKind::reflect: {
            const Face &f = scene.face(i.index);
            const auto gamma = fresnel_coeff(complex_permittivity(scene.material_of(f), frequency_hz),
                                             i.incidence_rad, i.pol);
            amp *= std::abs(gamma);
            phase += std::arg(gamma);
            break;
        }
        case InteractionKind::transmit: {
            const Face &f = scene.face(i.index);
            const Material &m = scene.material_of(f);
            const auto t = slab_transmission(complex_permittivity(m, frequency_hz), i.incidence_rad, i.pol,
                                             m.thickness_m, frequency_hz);
            amp *= std::abs(t);
            phase += std::arg(t);
            break;
        }
        case InteractionKind::diffract: {
            const double v = fresnel_kirchhoff_v(i.clearance_m, i.d1_m, i.d2_m, lambda);
            amp *= std::pow(10.0, -knife_edge_loss(v) / 20.0);
            break;
        }
        }
    }
    return {amp, std::remainder(phase, 2.0 * kPi), path.length_m / kSpeedOfLight};
}

namespace
{

bool reflects_from(const Face &f, double signed_dist)
{
    return f.two_sided ? std::abs(signed_dist) > kGeomEpsilon : signed_dist > kGeomEpsilon;
}

/// Reflection chains sharing prefixes. Node 0 is the real source; every other node
/// mirrors its parent's image across one face.
struct ChainNode
{
    int face = -1;
    int parent = -1;
    int depth = 0;
    Vec3 image;
};

class ChainTrie
{
  public:
    ChainTrie(const Scene &scene, Vec3 origin) : scene_(&scene) { nodes_.push_back({-1, -1, 0, origin}); }

    int child(int parent, int face)
    {
        const auto key = (static_cast<std::uint64_t>(parent) << 32) | static_cast<std::uint32_t>(face);
        const auto [it, inserted] = index_.try_emplace(key, static_cast<int>(nodes_.size()));
        if (inserted)
        {
            const ChainNode &p = nodes_[static_cast<std::size_t>(parent)];
            nodes_.push_back({face, parent, p.depth + 1, scene_->face(face).plane.mirror(p.image)});
        }
        return it->second;
    }

    const ChainNode &node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    std::size_t size() const { return nodes_.size(); }

    /// Specular points of the chain ending at `leaf`, seen from `target`: ordered from the
    /// target side back towards the origin. False when a point misses its face.
    bool backtrace(int leaf, Vec3 target, std::vector<Vec3> &points) const
    {
        points.clear();
        for (int c = leaf; c > 0; c = nodes_[static_cast<std::size_t>(c)].parent)
        {
            const ChainNode &n = nodes_[static_cast<std::size_t>(c)];
            const Face &f = scene_->face(n.face);
            const double st = f.plane.signed_distance(target);
            const double si = f.plane.signed_distance(n.image);
            if (!reflects_from(f, st) || st * si >= 0.0)
                return false;
            const Vec3 p = target + (n.image - target) * (st / (st - si));
            if (!f.contains(p))
                return false;
            points.push_back(p);
            target = p;
        }
        return true;
    }

  private:
    const Scene *scene_;
    std::vector<ChainNode> nodes_;
    std::unordered_map<std::uint64_t, int> index_;
};

constexpr double kFar = 1e7;

struct Shot
{
    Vec3 origin;
    Vec3 dir;
    double travelled;
    int node;
    int transmissions;
};

/// Launches rays from the trie origin, reflecting specularly up to max_reflections times
/// and passing through up to max_transmissions faces. `segment(shot, length)` sees every
/// straight run, `hit(shot, hit)` every face struck.
template <class Segment, class OnHit>
void launch(const Scene &scene, ChainTrie &trie, const std::vector<Vec3> &dirs, const TraceLimits &limits,
            Segment &&segment, OnHit &&on_hit)
{
    std::vector<Shot> stack;
    const Vec3 origin = trie.node(0).image;
    for (const Vec3 &d0 : dirs)
    {
        stack.push_back({origin, d0, 0.0, 0, 0});
        while (!stack.empty())
        {
            const Shot shot = stack.back();
            stack.pop_back();
            const auto hit = scene.intersect_first(shot.origin, shot.dir, kFar);
            segment(shot, hit ? hit->distance : kFar);
            if (!hit)
                continue;
            on_hit(shot, *hit);
            const Face &f = scene.face(hit->face);
            const double travelled = shot.travelled + hit->distance;
            if (trie.node(shot.node).depth < limits.max_reflections &&
                reflects_from(f, f.plane.signed_distance(shot.origin)))
            {
                const Vec3 n = f.normal();
                stack.push_back({hit->point, shot.dir - n * (2.0 * dot(shot.dir, n)), travelled,
                                 trie.child(shot.node, hit->face), shot.transmissions});
            }
            if (shot.transmissions < limits.max_transmissions)
                stack.push_back({hit->point, shot.dir, travelled, shot.node, shot.transmissions + 1});
        }
    }
}

/// (chain node, edge) pairs met by rays launched from the trie origin.
std::vector<std::pair<int, int>> edge_candidates(const Scene &scene, ChainTrie &trie, const std::vector<Vec3> &dirs,
                                                 const TraceLimits &limits,
                                                 const std::function<void(const Shot &, double)> &segment)
{
    std::unordered_set<std::uint64_t> seen;
    std::vector<std::pair<int, int>> out;
    launch(scene, trie, dirs, limits, segment, [&](const Shot &shot, const Hit &hit) {
        for (int e : scene.face_edges(hit.face))
        {
            const auto key = (static_cast<std::uint64_t>(shot.node) << 32) | static_cast<std::uint32_t>(e);
            if (seen.insert(key).second)
                out.emplace_back(shot.node, e);
        }
    });
    return out;
}

struct Hop
{
    InteractionKind kind;
    int index;
    Vec3 point;
    double clearance = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// Validates a candidate hop chain (reflection sides, leg obstructions) and builds the path,
/// inserting transmissions for legs that cross walls within the transmission budget.
std::optional<Path> finalize(const Scene &scene, Vec3 tx, Vec3 rx, const std::vector<Hop> &hops,
                             const TraceLimits &limits)
{
    Path path;
    path.interactions.reserve(hops.size() + 1);
    int transmissions = 0;
    Vec3 prev = tx;
    for (std::size_t h = 0; h <= hops.size(); ++h)
    {
        const Vec3 next = h < hops.size() ? hops[h].point : rx;
        const double leg = distance(prev, next);
        if (leg <= kGeomEpsilon)
            return std::nullopt;
        const int budget = limits.max_transmissions - transmissions;
        const auto hits = scene.crossings(prev, next, budget);
        if (static_cast<int>(hits.size()) > budget)
            return std::nullopt;
        const Vec3 dir = (next - prev) / leg;
        for (const Hit &hit : hits)
        {
            const Face &f = scene.face(hit.face);
            Interaction t;
            t.kind = InteractionKind::transmit;
            t.point = hit.point;
            t.index = hit.face;
            t.incidence_rad = std::acos(std::min(1.0, std::abs(dot(dir, f.normal()))));
            t.pol = dominant_polarization(dir, f.normal());
            path.interactions.push_back(t);
            ++transmissions;
        }
        path.length_m += leg;
        if (h == 0)
            path.departure = dir;
        if (h == hops.size())
        {
            path.arrival = -dir;
            break;
        }

        const Hop &hop = hops[h];
        Interaction in;
        in.kind = hop.kind;
        in.point = hop.point;
        in.index = hop.index;
        if (hop.kind == InteractionKind::reflect)
        {
            const Face &f = scene.face(hop.index);
            const Vec3 after = h + 1 < hops.size() ? hops[h + 1].point : rx;
            const double s_prev = f.plane.signed_distance(prev);
            const double s_next = f.plane.signed_distance(after);
            if (!reflects_from(f, s_prev) || !reflects_from(f, s_next) || s_prev * s_next <= 0.0)
                return std::nullopt;
            in.incidence_rad = std::acos(std::min(1.0, std::abs(dot(dir, f.normal()))));
            in.pol = dominant_polarization(dir, f.normal());
        }
        else
        {
            // both legs must leave the edge through free space, not into the wedge
            const Edge &e = scene.edge(hop.index);
            const Vec3 after = h + 1 < hops.size() ? hops[h + 1].point : rx;
            const Vec3 back = (prev - hop.point).normalized();
            const Vec3 ahead = (after - hop.point).normalized();
            auto leaves = [&e](Vec3 u) { return dot(e.normal0, u) > 1e-9 || dot(e.normal1, u) > 1e-9; };
            if (!leaves(back) || !leaves(ahead))
                return std::nullopt;
            in.clearance_m = hop.clearance;
            in.d1_m = hop.d1;
            in.d2_m = hop.d2;
        }
        path.interactions.push_back(in);
        prev = hop.point;
    }
    return path;
}

struct Unfolded
{
    Vec3 point;
    double clearance;
};

/// Point on edge e minimising |src - D| + |D - dst| (Keller cone condition). Only paths
/// that bend into the edge's shadow are accepted.
std::optional<Unfolded> diffraction_point(const Edge &e, Vec3 src, Vec3 dst)
{
    if (!e.exterior(src) || !e.exterior(dst))
        return std::nullopt;
    const Vec3 u = e.b - e.a;
    const double len = u.norm();
    const Vec3 un = u / len;
    const double ts = dot(src - e.a, un);
    const double td = dot(dst - e.a, un);
    const double rs = (src - e.a - un * ts).norm();
    const double rd = (dst - e.a - un * td).norm();
    if (rs + rd <= 1e-12)
        return std::nullopt;
    const double t = ts + (td - ts) * rs / (rs + rd);
    if (!(t > 1e-9 && t < len - 1e-9))
        return std::nullopt;
    const Vec3 d = e.a + un * t;

    const Vec3 line = dst - src;
    const double s = std::clamp(dot(d - src, line) / line.norm2(), 0.0, 1.0);
    const Vec3 q = src + line * s;
    if (e.exterior(q))
        return std::nullopt; // lit region: the undiffracted ray carries this contribution
    return Unfolded{d, distance(d, q)};
}

} // namespace

std::vector<Vec3> fibonacci_sphere(int n)
{
    if (n < 1)
        throw std::invalid_argument("ray count must be positive");
    std::vector<Vec3> dirs;
    dirs.reserve(static_cast<std::size_t>(n));
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i)
    {
        const double z = 1.0 - (2.0 * i + 1.0) / n;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        dirs.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
    return dirs;
}

namespace
{

/// Chains and edge candidates discovered from one receiver, shared by every transmitter.
struct Probe
{
    ChainTrie trie;
    std::unordered_map<int, std::vector<int>> by_edge;
    std::vector<std::pair<int, int>> edges;
};

/// Half-spaces bounding the reflected beam of `image` through face f (positive side kept).
/// False when the image lies on the face plane.
bool beam_planes(const Face &f, Vec3 image, std::vector<Plane> &planes)
{
    planes.clear();
    const double sd = f.plane.signed_distance(image);
    if (std::abs(sd) <= kGeomEpsilon)
        return false;
    const Vec3 n = sd > 0.0 ? -f.normal() : f.normal();
    planes.push_back({n, dot(n, f.vertices[0]) - 1e-6});
    Vec3 centroid;
    for (int i = 0; i < f.n_vertices; ++i)
        centroid += f.vertices[static_cast<std::size_t>(i)];
    centroid = centroid / f.n_vertices;
    for (int i = 0; i < f.n_vertices; ++i)
    {
        const Vec3 a = f.vertices[static_cast<std::size_t>(i)] - image;
        const Vec3 b = f.vertices[static_cast<std::size_t>((i + 1) % f.n_vertices)] - image;
        Vec3 pn = cross(a, b);
        const double len = pn.norm();
        if (len < 1e-12)
            continue;
        pn = pn / len;
        if (dot(pn, centroid - image) < 0.0)
            pn = -pn;
        planes.push_back({pn, dot(pn, image) - 1e-6});
    }
    return true;
}

/// Every reflection chain up to max_depth whose beam can reach its next face.
void expand_exhaustive(const Scene &scene, ChainTrie &trie, int max_depth)
{
    if (max_depth < 1)
        return;
    const Vec3 origin = trie.node(0).image;
    const auto faces = scene.faces();
    for (std::size_t i = 0; i < faces.size(); ++i)
        if (reflects_from(faces[i], faces[i].plane.signed_distance(origin)))
            trie.child(0, static_cast<int>(i));
    std::vector<Plane> planes;
    for (std::size_t c = 1; c < trie.size(); ++c)
    {
        const ChainNode node = trie.node(static_cast<int>(c));
        if (node.depth >= max_depth)
            continue;
        const Face &fc = scene.face(node.face);
        if (!beam_planes(fc, node.image, planes))
            continue;
        const Plane exit_plane = planes.front();
        scene.face_index().traverse_planes(planes, [&](std::uint32_t fi) {
            const int f_id = static_cast<int>(fi);
            if (f_id == node.face)
                return;
            const Face &f = scene.face(f_id);
            if (std::abs(dot(f.normal(), fc.normal())) > 1.0 - 1e-12 &&
                std::abs(f.plane.signed_distance(fc.vertices[0])) < kGeomEpsilon)
                return; // coplanar
            bool ahead = false;
            for (int k = 0; k < f.n_vertices && !ahead; ++k)
                ahead = exit_plane.signed_distance(f.vertices[static_cast<std::size_t>(k)]) > 0.0;
            bool lit = false;
            for (int k = 0; k < fc.n_vertices && !lit; ++k)
                lit = reflects_from(f, f.plane.signed_distance(fc.vertices[static_cast<std::size_t>(k)]));
            if (ahead && lit)
                trie.child(static_cast<int>(c), f_id);
        });
    }
}

/// (chain node, edge) pairs for every edge inside the beam of every chain of the trie.
std::vector<std::pair<int, int>> beam_edges(const Scene &scene, const ChainTrie &trie)
{
    std::vector<std::pair<int, int>> out;
    for (std::size_t e = 0; e < scene.edges().size(); ++e)
        out.emplace_back(0, static_cast<int>(e));
    std::vector<Plane> planes;
    for (std::size_t c = 1; c < trie.size(); ++c)
    {
        const ChainNode &node = trie.node(static_cast<int>(c));
        if (!beam_planes(scene.face(node.face), node.image, planes))
            continue;
        scene.edge_index().traverse_planes(
            planes, [&](std::uint32_t e) { out.emplace_back(static_cast<int>(c), static_cast<int>(e)); });
    }
    return out;
}

class LinkSolver
{
  public:
    LinkSolver(const Scene &scene, const TraceLimits &limits) : scene_(scene), limits_(limits) {}

    /// `chains` must be sorted and free of duplicates.
    void solve(const ChainTrie &src, std::span<const std::pair<int, int>> src_edges, std::span<const int> chains,
               const Probe *probe, Vec3 rx, std::vector<Path> &paths)
    {
        const Vec3 tx = src.node(0).image;
        hops_.clear();
        if (auto p = finalize(scene_, tx, rx, hops_, limits_))
            paths.push_back(std::move(*p));

        for (int n : chains)
        {
            if (!src.backtrace(n, rx, pts_))
                continue;
            hops_.clear();
            append_reversed(src, n, pts_);
            if (auto p = finalize(scene_, tx, rx, hops_, limits_))
                paths.push_back(std::move(*p));
        }
        if (probe == nullptr)
            return;

        tried_.clear();
        for (const auto &[a, e] : src_edges)
        {
            diffract(src, *probe, a, e, 0, rx, paths);
            if (auto it = probe->by_edge.find(e); it != probe->by_edge.end())
                for (int b : it->second)
                    diffract(src, *probe, a, e, b, rx, paths);
        }
        for (const auto &[b, e] : probe->edges)
            diffract(src, *probe, 0, e, b, rx, paths);
    }

  private:
    void append_reversed(const ChainTrie &trie, int leaf, const std::vector<Vec3> &pts)
    {
        const std::size_t first = hops_.size();
        int c = leaf;
        for (const Vec3 &p : pts)
        {
            hops_.push_back({InteractionKind::reflect, trie.node(c).face, p});
            c = trie.node(c).parent;
        }
        std::reverse(hops_.begin() + static_cast<std::ptrdiff_t>(first), hops_.end());
    }

    void diffract(const ChainTrie &src, const Probe &probe, int a, int e, int b, Vec3 rx, std::vector<Path> &paths)
    {
        const ChainNode &na = src.node(a);
        const ChainNode &nb = probe.trie.node(b);
        if (na.depth + nb.depth > limits_.max_reflections || !tried_.emplace(a, e, b).second)
            return;
        const auto hit = diffraction_point(scene_.edge(e), na.image, nb.image);
        if (!hit)
            return;
        if (!src.backtrace(a, hit->point, pts_) || !probe.trie.backtrace(b, hit->point, dst_pts_))
            return;
        hops_.clear();
        append_reversed(src, a, pts_);
        hops_.push_back({InteractionKind::diffract, e, hit->point, hit->clearance, distance(na.image, hit->point),
                         distance(hit->point, nb.image)});
        int c = b;
        for (const Vec3 &p : dst_pts_)
        {
            hops_.push_back({InteractionKind::reflect, probe.trie.node(c).face, p});
            c = probe.trie.node(c).parent;
        }
        if (auto p = finalize(scene_, src.node(0).image, rx, hops_, limits_))
            paths.push_back(std::move(*p));
    }

    const Scene &scene_;
    const TraceLimits &limits_;
    std::vector<Hop> hops_;
    std::vector<Vec3> pts_;
    std::vector<Vec3> dst_pts_;
    std::set<std::tuple<int, int, int>> tried_;
};

} // namespace

std::vector<std::vector<std::vector<Path>>> find_paths(const Scene &scene, std::span<const Vec3> txs,
                                                       std::span<const Vec3> rxs, const TraceLimits &limits)
{
    limits.validate();
    for (const Vec3 &tx : txs)
        for (const Vec3 &rx : rxs)
            if (distance(tx, rx) <= kGeomEpsilon)
                throw std::invalid_argument("transmitter and receiver coincide");

    std::vector<std::vector<std::vector<Path>>> result(txs.size(), std::vector<std::vector<Path>>(rxs.size()));
    if (txs.empty() || rxs.empty())
        return result;

    const bool with_diffraction = limits.max_diffractions >= 1 && !scene.edges().empty();
    const bool exhaustive =
        limits.search == SearchMode::exhaustive ||
        (limits.search == SearchMode::automatic &&
         scene.faces().size() <= static_cast<std::size_t>(limits.exhaustive_face_limit));

    std::vector<Probe> probes;
    if (with_diffraction)
    {
        const std::vector<Vec3> probe_dirs = exhaustive ? std::vector<Vec3>{} : fibonacci_sphere(limits.probe_rays);
        probes.reserve(rxs.size());
        for (const Vec3 &rx : rxs)
        {
            Probe probe{ChainTrie(scene, rx), {}, {}};
            if (exhaustive)
            {
                expand_exhaustive(scene, probe.trie, limits.max_reflections);
                probe.edges = beam_edges(scene, probe.trie);
            }
            else
                probe.edges = edge_candidates(scene, probe.trie, probe_dirs, limits, [](const Shot &, double) {});
            for (const auto &[b, e] : probe.edges)
                if (b != 0)
                    probe.by_edge[e].push_back(b);
            probes.push_back(std::move(probe));
        }
    }

    const std::vector<Vec3> launch_dirs = exhaustive ? std::vector<Vec3>{} : fibonacci_sphere(limits.launch_rays);
    const double spacing = std::sqrt(4.0 * kPi / limits.launch_rays);
    LinkSolver solver(scene, limits);
    std::vector<int> all_chains;
    for (std::size_t t = 0; t < txs.size(); ++t)
    {
        if (exhaustive)
        {
            ChainTrie src(scene, txs[t]);
            expand_exhaustive(scene, src, limits.max_reflections);
            all_chains.resize(src.size() - 1);
            std::iota(all_chains.begin(), all_chains.end(), 1);
            const auto src_edges = with_diffraction ? beam_edges(scene, src) : std::vector<std::pair<int, int>>{};
            for (std::size_t r = 0; r < rxs.size(); ++r)
                solver.solve(src, src_edges, all_chains, with_diffraction ? &probes[r] : nullptr, rxs[r],
                             result[t][r]);
            continue;
        }

        // receiver r collects chains whose rays pass within the local ray spacing
        ChainTrie src(scene, txs[t]);
        std::vector<std::vector<int>> received(rxs.size());
        auto receive = [&](const Shot &shot, double length) {
            if (shot.node == 0)
                return;
            for (std::size_t r = 0; r < rxs.size(); ++r)
            {
                const Vec3 v = rxs[r] - shot.origin;
                const double s = dot(v, shot.dir);
                if (s <= 0.0 || s > length)
                    continue;
                const double radius = (shot.travelled + s) * spacing;
                if (v.norm2() - s * s <= radius * radius)
                    received[r].push_back(shot.node);
            }
        };
        std::vector<std::pair<int, int>> src_edges;
        if (with_diffraction)
            src_edges = edge_candidates(scene, src, launch_dirs, limits, receive);
        else
            launch(scene, src, launch_dirs, limits, receive, [](const Shot &, const Hit &) {});

        for (std::size_t r = 0; r < rxs.size(); ++r)
        {
            auto &chains = received[r];
            std::sort(chains.begin(), chains.end());
            chains.erase(std::unique(chains.begin(), chains.end()), chains.end());
            solver.solve(src, src_edges, chains, with_diffraction ? &probes[r] : nullptr, rxs[r], result[t][r]);
        }
    }
    return result;
}

std::vector<std::vector<Path>> find_paths(const Scene &scene, Vec3 tx, std::span<const Vec3> rxs,
                                          const TraceLimits &limits)
{
    return std::move(find_paths(scene, std::span<const Vec3>(&tx, 1), rxs, limits).front());
}

std::vector<Path> find_paths(const Scene &scene, Vec3 tx, Vec3 rx, const TraceLimits &limits)
{
    return std::move(find_paths(scene, tx, std::span<const Vec3>(&rx, 1), limits).front());
}

std::vector<Path> evaluate_paths(std::vector<Path> paths, const Scene &scene, double frequency_hz,
                                 const TraceLimits &limits)
{
    std::vector<Path> kept;
    kept.reserve(paths.size());
    for (Path &p : paths)
    {
        const PathField field = path_field(p, scene, frequency_hz);
        p.amp = field.amp;
        p.phase_rad = field.phase_rad;
        p.delay_s = field.delay_s;
        const double power_dbm = limits.reference_power_dbm + 20.0 * std::log10(std::max(p.amp, 1e-300));
        if (p.amp > 0.0 && power_dbm >= limits.power_floor_dbm)
            kept.push_back(std::move(p));
    }
    std::sort(kept.begin(), kept.end(), [](const Path &x, const Path &y) {
        if (x.amp != y.amp)
            return x.amp > y.amp;
        if (x.length_m != y.length_m)
            return x.length_m < y.length_m;
        if (x.interactions.size() != y.interactions.size())
            return x.interactions.size() < y.interactions.size();
        for (std::size_t i = 0; i < x.interactions.size(); ++i)
        {
            const Vec3 a = x.interactions[i].point, b = y.interactions[i].point;
            if (a.x != b.x)
                return a.x < b.x;
            if (a.y != b.y)
                return a.y < b.y;
            if (a.z != b.z)
                return a.z < b.z;
        }
        return false;
    });
    if (kept.size() > static_cast<std::size_t>(limits.max_paths))
        kept.resize(static_cast<std::size_t>(limits.max_paths));
    return kept;
}

std::vector<Path> trace_paths(const Scene &scene, Vec3 tx, Vec3 rx, double frequency_hz, const TraceLimits &limits)
{
    return evaluate_paths(find_paths(scene, tx, rx, limits), scene, frequency_hz, limits);
}

} // namespace urbanrt
