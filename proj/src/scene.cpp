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
#include "urbanrt/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace urbanrt
{

bool Face::contains(Vec3 p, double tol) const
{
    const Vec3 n = plane.normal;
    for (int i = 0; i < n_vertices; ++i)
    {
        const Vec3 &a = vertices[static_cast<std::size_t>(i)];
        const Vec3 &b = vertices[static_cast<std::size_t>((i + 1) % n_vertices)];
        const Vec3 e = b - a;
        // signed distance of p from the edge line, inside is positive for CCW winding about n
        if (dot(cross(e, p - a), n) < -tol * e.norm())
            return false;
    }
    return true;
}

Face make_face(std::span<const Vec3> vertices, int material, bool two_sided, std::optional<Vec3> outward)
{
    if (vertices.size() < 3 || vertices.size() > 4)
        throw std::invalid_argument("faces must have 3 or 4 vertices");
    Face f;
    f.n_vertices = static_cast<int>(vertices.size());
    std::copy(vertices.begin(), vertices.end(), f.vertices.begin());

    // Newell normal
    Vec3 n;
    for (int i = 0; i < f.n_vertices; ++i)
    {
        const Vec3 &a = f.vertices[static_cast<std::size_t>(i)];
        const Vec3 &b = f.vertices[static_cast<std::size_t>((i + 1) % f.n_vertices)];
        n.x += (a.y - b.y) * (a.z + b.z);
        n.y += (a.z - b.z) * (a.x + b.x);
        n.z += (a.x - b.x) * (a.y + b.y);
    }
    if (n.norm() < 1e-12)
        throw std::invalid_argument("degenerate face");
    n = n.normalized();
    if (outward && dot(n, *outward) < 0.0)
    {
        std::reverse(f.vertices.begin(), f.vertices.begin() + f.n_vertices);
        n = -n;
    }
    f.plane = {n, dot(n, f.vertices[0])};
    for (int i = 0; i < f.n_vertices; ++i)
    {
        if (std::abs(f.plane.signed_distance(f.vertices[static_cast<std::size_t>(i)])) > 1e-6)
            throw std::invalid_argument("face vertices are not coplanar");
        f.box.expand(f.vertices[static_cast<std::size_t>(i)]);
    }
    f.material = material;
    f.two_sided = two_sided;
    return f;
}

std::optional<double> intersect_face(const Face &f, Vec3 origin, Vec3 dir)
{
    const double denom = dot(f.plane.normal, dir);
    if (std::abs(denom) < 1e-12)
        return std::nullopt;
    const double t = -f.plane.signed_distance(origin) / denom;
    if (!(t > 0.0))
        return std::nullopt;
    if (!f.contains(origin + dir * t))
        return std::nullopt;
    return t;
}

namespace
{

Aabb edge_box(const Edge &e)
{
    Aabb b;
    b.expand(e.a);
    b.expand(e.b);
    return b;
}

} // namespace

Scene::Scene(std::vector<Face> faces, std::vector<Edge> edges, std::vector<Material> materials)
    : faces_(std::move(faces)), edges_(std::move(edges)), materials_(std::move(materials))
{
    std::vector<Aabb> boxes;
    boxes.reserve(faces_.size());
    for (const Face &f : faces_)
    {
        if (f.material < 0 || static_cast<std::size_t>(f.material) >= materials_.size())
            throw std::invalid_argument("face refers to an unknown material index");
        boxes.push_back(f.box);
        bounds_.expand(f.box);
    }
    face_bvh_ = Bvh(boxes);
    boxes.clear();
    for (const Edge &e : edges_)
        boxes.push_back(edge_box(e));
    edge_bvh_ = Bvh(boxes);

    std::vector<std::vector<int>> adjacent(faces_.size());
    std::vector<Plane> planes;
    for (std::size_t ei = 0; ei < edges_.size(); ++ei)
    {
        const Edge &e = edges_[ei];
        const Aabb box = edge_box(e);
        planes.clear();
        for (int axis = 0; axis < 3; ++axis)
        {
            const Vec3 n{axis == 0 ? 1.0 : 0.0, axis == 1 ? 1.0 : 0.0, axis == 2 ? 1.0 : 0.0};
            planes.push_back({n, box.lo[axis] - 1e-6});
            planes.push_back({-n, -box.hi[axis] - 1e-6});
        }
        const Vec3 mid = (e.a + e.b) * 0.5;
        face_bvh_.traverse_planes(planes, [&](std::uint32_t fi) {
            const Face &f = faces_[fi];
            if (std::abs(f.plane.signed_distance(e.a)) < 1e-6 && std::abs(f.plane.signed_distance(e.b)) < 1e-6 &&
                f.contains(mid, 1e-6))
                adjacent[fi].push_back(static_cast<int>(ei));
        });
    }
    face_edge_offsets_.assign(1, 0);
    for (const auto &list : adjacent)
    {
        face_edge_list_.insert(face_edge_list_.end(), list.begin(), list.end());
        face_edge_offsets_.push_back(face_edge_list_.size());
    }
}

std::optional<Hit> Scene::intersect_first(Vec3 origin, Vec3 dir, double t_max) const
{
    std::optional<Hit> best;
    face_bvh_.traverse_ray(origin, dir, t_max, [&](std::uint32_t i, double t_lim) {
        const Face &f = faces_[i];
        auto t = intersect_face(f, origin, dir);
        if (t && *t > kGeomEpsilon && *t < t_lim)
        {
            best = Hit{static_cast<int>(i), origin + dir * *t, *t};
            return *t;
        }
        return t_lim;
    });
    return best;
}

bool Scene::is_los(Vec3 a, Vec3 b) const
{
    return crossings(a, b, 0).empty();
}

std::vector<Hit> Scene::crossings(Vec3 a, Vec3 b, int limit) const
{
    std::vector<Hit> hits;
    const double len = distance(a, b);
    if (len <= 2.0 * kGeomEpsilon)
        return hits;
    const Vec3 dir = (b - a) / len;
    const double t_end = len - kGeomEpsilon;
    const auto cap = static_cast<std::size_t>(limit) + 1;
    face_bvh_.traverse_ray(a, dir, t_end, [&](std::uint32_t i, double t_lim) {
        if (hits.size() >= cap)
            return -1.0; // enough found; stop descending
        auto t = intersect_face(faces_[i], a, dir);
        if (t && *t > kGeomEpsilon && *t < t_end)
            hits.push_back({static_cast<int>(i), a + dir * *t, *t});
        return t_lim;
    });
    std::sort(hits.begin(), hits.end(), [](const Hit &x, const Hit &y) {
        return x.distance != y.distance ? x.distance < y.distance : x.face < y.face;
    });
    if (hits.size() > cap)
        hits.resize(cap);
    return hits;
}

bool Scene::inside_solid(Vec3 p) const
{
    const Vec3 up{0.0, 0.0, 1.0};
    auto hit = intersect_first(p, up, 1e7);
    return hit && dot(faces_[static_cast<std::size_t>(hit->face)].normal(), up) > 0.0;
}

Scene build_scene(const CityLayout &layout, const MaterialLibrary &library, const std::string &ground)
{
    std::vector<Material> materials;
    std::map<std::string, int> index;
    auto material_index = [&](const std::string &name) {
        auto it = index.find(name);
        if (it != index.end())
            return it->second;
        materials.push_back(library.get(name));
        const int idx = static_cast<int>(materials.size()) - 1;
        index.emplace(name, idx);
        return idx;
    };

    std::vector<Face> faces;
    std::vector<Edge> edges;
    faces.reserve(layout.buildings.size() * 5 + 1);
    edges.reserve(layout.buildings.size() * 8);

    for (std::size_t bi = 0; bi < layout.buildings.size(); ++bi)
    {
        const Building &b = layout.buildings[bi];
        const int mat = material_index(b.material);
        const double hw = 0.5 * b.width_m;
        const double x0 = b.center.x - hw, x1 = b.center.x + hw;
        const double y0 = b.center.y - hw, y1 = b.center.y + hw;
        const double h = b.height_m;
        const int id = static_cast<int>(bi);

        auto add = [&](std::array<Vec3, 4> v, Vec3 out) {
            Face f = make_face(v, mat, false, out);
            f.building = id;
            faces.push_back(f);
        };
        add({Vec3{x0, y0, 0}, {x1, y0, 0}, {x1, y0, h}, {x0, y0, h}}, {0, -1, 0});
        add({Vec3{x1, y0, 0}, {x1, y1, 0}, {x1, y1, h}, {x1, y0, h}}, {1, 0, 0});
        add({Vec3{x1, y1, 0}, {x0, y1, 0}, {x0, y1, h}, {x1, y1, h}}, {0, 1, 0});
        add({Vec3{x0, y1, 0}, {x0, y0, 0}, {x0, y0, h}, {x0, y1, h}}, {-1, 0, 0});
        add({Vec3{x0, y0, h}, {x1, y0, h}, {x1, y1, h}, {x0, y1, h}}, {0, 0, 1});

        const Vec3 nx0{-1, 0, 0}, nx1{1, 0, 0}, ny0{0, -1, 0}, ny1{0, 1, 0}, nz{0, 0, 1};
        // vertical corner edges
        edges.push_back({{x0, y0, 0}, {x0, y0, h}, nx0, ny0, id});
        edges.push_back({{x1, y0, 0}, {x1, y0, h}, nx1, ny0, id});
        edges.push_back({{x1, y1, 0}, {x1, y1, h}, nx1, ny1, id});
        edges.push_back({{x0, y1, 0}, {x0, y1, h}, nx0, ny1, id});
        // rooftop edges
        edges.push_back({{x0, y0, h}, {x1, y0, h}, nz, ny0, id});
        edges.push_back({{x1, y0, h}, {x1, y1, h}, nz, nx1, id});
        edges.push_back({{x1, y1, h}, {x0, y1, h}, nz, ny1, id});
        edges.push_back({{x0, y1, h}, {x0, y0, h}, nz, nx0, id});
    }

    const double ex = layout.extent_x_m();
    const double ey = layout.extent_y_m();
    const double margin = std::max({1000.0, ex, ey});
    const int gmat = material_index(ground);
    faces.push_back(make_face(std::array<Vec3, 4>{Vec3{-margin, -margin, 0}, {ex + margin, -margin, 0},
                                                  {ex + margin, ey + margin, 0}, {-margin, ey + margin, 0}},
                              gmat, false, Vec3{0, 0, 1}));
    return Scene(std::move(faces), std::move(edges), std::move(materials));
}

namespace
{

struct VertexKey
{
    long long x, y, z;
    auto operator<=>(const VertexKey &) const = default;
};

VertexKey key_of(Vec3 p)
{
    constexpr double q = 1e6; // micrometre grid
    return {std::llround(p.x * q), std::llround(p.y * q), std::llround(p.z * q)};
}

/// Convex wedges between pairs of faces sharing a border.
std::vector<Edge> derive_edges(const std::vector<Face> &faces)
{
    std::map<std::pair<VertexKey, VertexKey>, std::vector<std::pair<int, std::pair<Vec3, Vec3>>>> borders;
    for (std::size_t fi = 0; fi < faces.size(); ++fi)
    {
        const Face &f = faces[fi];
        for (int i = 0; i < f.n_vertices; ++i)
        {
            Vec3 a = f.vertices[static_cast<std::size_t>(i)];
            Vec3 b = f.vertices[static_cast<std::size_t>((i + 1) % f.n_vertices)];
            auto ka = key_of(a), kb = key_of(b);
            if (kb < ka)
            {
                std::swap(ka, kb);
                std::swap(a, b);
            }
            borders[{ka, kb}].push_back({static_cast<int>(fi), {a, b}});
        }
    }
    std::vector<Edge> edges;
    for (const auto &[key, users] : borders)
    {
        if (users.size() != 2)
            continue;
        const Face &f0 = faces[static_cast<std::size_t>(users[0].first)];
        const Face &f1 = faces[static_cast<std::size_t>(users[1].first)];
        if (dot(f0.normal(), f1.normal()) > 0.999)
            continue; // coplanar split, not a wedge
        // convex when the far vertices of each face lie behind the other face's plane
        bool convex = true;
        for (int i = 0; i < f1.n_vertices && convex; ++i)
            if (f0.plane.signed_distance(f1.vertices[static_cast<std::size_t>(i)]) > 1e-6)
                convex = false;
        if (!convex)
            continue;
        const auto &[a, b] = users[0].second;
        edges.push_back({a, b, f0.normal(), f1.normal(), f0.building});
    }
    return edges;
}

} // namespace

Scene make_scene(std::vector<Face> faces, std::vector<Material> materials)
{
    auto edges = derive_edges(faces);
    return Scene(std::move(faces), std::move(edges), std::move(materials));
}

Scene import_obj(const std::filesystem::path &path, const MaterialLibrary &library, bool add_ground,
                 const std::string &ground)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());

    std::vector<Material> materials;
    std::map<std::string, int> index;
    auto material_index = [&](const std::string &name) {
        auto it = index.find(name);
        if (it != index.end())
            return it->second;
        materials.push_back(library.get(name));
        index.emplace(name, static_cast<int>(materials.size()) - 1);
        return static_cast<int>(materials.size()) - 1;
    };

    std::vector<Vec3> vertices;
    std::vector<Face> faces;
    int current = -1;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#')
            continue;
        auto fail = [&](const std::string &msg) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + msg);
        };
        if (tag == "v")
        {
            Vec3 v;
            if (!(ls >> v.x >> v.y >> v.z))
                fail("malformed vertex");
            vertices.push_back(v);
        }
        else if (tag == "usemtl" || tag == "g")
        {
            std::string name;
            if (!(ls >> name))
                fail("missing material name");
            current = material_index(name);
        }
        else if (tag == "f")
        {
            std::vector<Vec3> poly;
            std::string tok;
            while (ls >> tok)
            {
                // accept v, v/vt, v//vn, v/vt/vn and keep the position index only
                const long idx = std::stol(tok.substr(0, tok.find('/')));
                const long n = static_cast<long>(vertices.size());
                const long resolved = idx > 0 ? idx - 1 : n + idx;
                if (resolved < 0 || resolved >= n)
                    fail("vertex index out of range");
                poly.push_back(vertices[static_cast<std::size_t>(resolved)]);
            }
            if (current < 0)
                current = material_index("concrete");
            try
            {
                faces.push_back(make_face(poly, current, true));
            }
            catch (const std::invalid_argument &e)
            {
                fail(e.what());
            }
        }
        // other OBJ statements (vt, vn, o, s, mtllib) are ignored
    }

    auto edges = derive_edges(faces);
    if (add_ground)
    {
        Aabb box;
        for (const Face &f : faces)
            box.expand(f.box);
        if (box.empty())
            box.expand(Vec3{});
        const double margin = std::max({1000.0, box.extent().x, box.extent().y});
        const int gmat = material_index(ground);
        faces.push_back(make_face(std::array<Vec3, 4>{Vec3{box.lo.x - margin, box.lo.y - margin, 0},
                                                      {box.hi.x + margin, box.lo.y - margin, 0},
                                                      {box.hi.x + margin, box.hi.y + margin, 0},
                                                      {box.lo.x - margin, box.hi.y + margin, 0}},
                                  gmat, false, Vec3{0, 0, 1}));
    }
    return Scene(std::move(faces), std::move(edges), std::move(materials));
}

} // namespace urbanrt
