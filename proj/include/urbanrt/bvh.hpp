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

#include <cstdint>
#include <span>
#include <vector>

namespace urbanrt
{

/// Bounding volume hierarchy over an indexed set of boxes.
///
/// The tree only knows primitive bounds; exact primitive tests are supplied by the caller
/// through the visitor passed to each query, so the same structure indexes faces and edges.
class Bvh
{
  public:
    Bvh() = default;
    explicit Bvh(std::span<const Aabb> boxes);

    std::size_t size() const { return order_.size(); }
    const Aabb &bounds() const { return nodes_.empty() ? empty_ : nodes_.front().box; }

    /// Visits every primitive whose box the ray [0, t_max] enters. The visitor returns the
    /// (possibly shortened) t_max, which lets nearest-hit queries cull the remaining nodes.
    template <class Visitor>
    void traverse_ray(Vec3 origin, Vec3 dir, double t_max, Visitor &&visit) const
    {
        if (nodes_.empty())
            return;
        const Vec3 inv{1.0 / dir.x, 1.0 / dir.y, 1.0 / dir.z};
        struct Entry
        {
            std::uint32_t node;
            double t;
        };
        Entry stack[128];
        int top = 0;
        const double t_root = nodes_.front().box.ray_entry(origin, inv, t_max);
        if (t_root > t_max)
            return;
        stack[top++] = {0, t_root};
        while (top > 0)
        {
            const Entry entry = stack[--top];
            if (entry.t > t_max)
                continue;
            const Node &node = nodes_[entry.node];
            if (node.count > 0)
            {
                for (std::uint32_t i = node.first; i < node.first + node.count; ++i)
                {
                    t_max = visit(order_[i], t_max);
                    if (t_max < 0.0)
                        return;
                }
                continue;
            }
            // near child on top of the stack so hits found there cull the far one
            const double t0 = nodes_[node.first].box.ray_entry(origin, inv, t_max);
            const double t1 = nodes_[node.first + 1].box.ray_entry(origin, inv, t_max);
            const bool first_near = t0 <= t1;
            const Entry near{first_near ? node.first : node.first + 1, first_near ? t0 : t1};
            const Entry far{first_near ? node.first + 1 : node.first, first_near ? t1 : t0};
            if (far.t <= t_max)
                stack[top++] = far;
            if (near.t <= t_max)
                stack[top++] = near;
        }
    }

    /// Visits every primitive whose box is not entirely outside one of the half-spaces
    /// (positive side of each plane is kept). Conservative: callers re-test exactly.
    template <class Visitor>
    void traverse_planes(std::span<const Plane> planes, Visitor &&visit) const
    {
        if (nodes_.empty())
            return;
        std::uint32_t stack[128];
        int top = 0;
        stack[top++] = 0;
        while (top > 0)
        {
            const Node &node = nodes_[stack[--top]];
            bool culled = false;
            for (const Plane &pl : planes)
            {
                if (node.box.outside(pl))
                {
                    culled = true;
                    break;
                }
            }
            if (culled)
                continue;
            if (node.count > 0)
            {
                for (std::uint32_t i = node.first; i < node.first + node.count; ++i)
                    visit(order_[i]);
                continue;
            }
            stack[top++] = node.first;
            stack[top++] = node.first + 1;
        }
    }

  private:
    struct Node
    {
        Aabb box;
        std::uint32_t first = 0; // child index (inner) or offset into order_ (leaf)
        std::uint32_t count = 0; // 0 for inner nodes
    };

    void build(std::span<const Aabb> boxes, const std::vector<Vec3> &centroids, std::uint32_t self,
               std::uint32_t begin, std::uint32_t end);

    std::vector<Node> nodes_;
    std::vector<std::uint32_t> order_;
    Aabb empty_{};
};

} // namespace urbanrt
