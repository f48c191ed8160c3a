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

#include "urbanrt/bvh.hpp"
#include "urbanrt/city.hpp"
#include "urbanrt/geometry.hpp"
#include "urbanrt/materials.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace urbanrt
{

/// Self-intersection guard applied at segment ends and after every interaction (m).
inline constexpr double kGeomEpsilon = 1e-4;

/// Planar convex polygon (triangle or quad) with an outward normal.
struct Face
{
    std::array<Vec3, 4> vertices{};
    int n_vertices = 0;
    Plane plane;
    int material = 0;
    int building = -1;
    /// One-sided faces bound closed solids and only reflect on their outward side.
    bool two_sided = false;
    Aabb box;

    Vec3 normal() const { return plane.normal; }
    /// Point-in-polygon test for a point already on the face plane.
    bool contains(Vec3 p, double tol = 1e-9) const;
};

/// Builds a face from 3 or 4 coplanar vertices. When `outward` is given the vertex
/// winding is flipped as needed so the normal points into that half-space.
Face make_face(std::span<const Vec3> vertices, int material, bool two_sided = false,
               std::optional<Vec3> outward = std::nullopt);

/// Convex wedge edge usable as a diffraction site.
struct Edge
{
    Vec3 a;
    Vec3 b;
    /// Outward normals of the two faces meeting at the edge.
    Vec3 normal0;
    Vec3 normal1;
    int building = -1;

    Vec3 direction() const { return (b - a).normalized(); }
    double length() const { return distance(a, b); }
    /// True when p lies outside the solid wedge bounded by the two faces.
    bool exterior(Vec3 p) const
    {
        return dot(normal0, p - a) > 0.0 || dot(normal1, p - a) > 0.0;
    }
};

struct Hit
{
    int face = -1;
    Vec3 point;
    double distance = 0.0;
};

/// Immutable intersectable world: faces, diffraction edges and their materials.
class Scene
{
  public:
    Scene() = default;
    Scene(std::vector<Face> faces, std::vector<Edge> edges, std::vector<Material> materials);

    std::span<const Face> faces() const { return faces_; }
    std::span<const Edge> edges() const { return edges_; }
    std::span<const Material> materials() const { return materials_; }
    const Face &face(int i) const { return faces_[static_cast<std::size_t>(i)]; }
    const Edge &edge(int i) const { return edges_[static_cast<std::size_t>(i)]; }
    const Material &material_of(const Face &f) const { return materials_[static_cast<std::size_t>(f.material)]; }
    const Aabb &bounds() const { return bounds_; }
    const Bvh &face_index() const { return face_bvh_; }
    const Bvh &edge_index() const { return edge_bvh_; }
    /// Edges lying on the border of face i.
    std::span<const int> face_edges(int i) const
    {
        const auto b = face_edge_offsets_[static_cast<std::size_t>(i)];
        const auto e = face_edge_offsets_[static_cast<std::size_t>(i) + 1];
        return std::span<const int>(face_edge_list_).subspan(b, e - b);
    }

    /// Nearest face hit at distance in (kGeomEpsilon, t_max). `dir` must be unit length.
    std::optional<Hit> intersect_first(Vec3 origin, Vec3 dir, double t_max) const;

    /// True iff no face intersects the open segment (a, b).
    bool is_los(Vec3 a, Vec3 b) const;

    /// Faces crossed by the open segment (a, b), ordered from a. Stops collecting once more
    /// than `limit` crossings were found, so the result size is at most limit + 1.
    std::vector<Hit> crossings(Vec3 a, Vec3 b, int limit) const;

    /// True when p lies inside a closed building solid (upward probe hits a face from behind).
    bool inside_solid(Vec3 p) const;

  private:
    std::vector<Face> faces_;
    std::vector<Edge> edges_;
    std::vector<Material> materials_;
    Aabb bounds_;
    Bvh face_bvh_;
    Bvh edge_bvh_;
    std::vector<std::size_t> face_edge_offsets_;
    std::vector<int> face_edge_list_;
};

/// Ray-face intersection distance along unit `dir`, or nullopt.
std::optional<double> intersect_face(const Face &f, Vec3 origin, Vec3 dir);

/// Five faces per building (four walls and a roof) plus one ground face.
Scene build_scene(const CityLayout &layout, const MaterialLibrary &library, const std::string &ground = "dry_earth");

/// Scene from an explicit face list; edges are derived from shared polygon borders.
Scene make_scene(std::vector<Face> faces, std::vector<Material> materials);

/// Triangle/quad soup in an OBJ-compatible subset: `v x y z`, `f i j k [l]` (1-based,
/// negative indices relative), `usemtl name` or `g name` selecting the material of the
/// following faces. Imported faces are two-sided. A ground face is appended on request.
Scene import_obj(const std::filesystem::path &path, const MaterialLibrary &library, bool add_ground = true,
                 const std::string &ground = "dry_earth");

} // namespace urbanrt
