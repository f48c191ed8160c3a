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
#include "urbanrt/bvh.hpp"

#include <algorithm>
#include <numeric>

namespace urbanrt
{

namespace
{
constexpr std::uint32_t kLeafSize = 4;
}

Bvh::Bvh(std::span<const Aabb> boxes)
{
    if (boxes.empty())
        return;
    order_.resize(boxes.size());
    std::iota(order_.begin(), order_.end(), 0u);
    std::vector<Vec3> centroids(boxes.size());
    for (std::size_t i = 0; i < boxes.size(); ++i)
        centroids[i] = boxes[i].center();
    nodes_.reserve(2 * boxes.size() / kLeafSize + 2);
    nodes_.emplace_back();
    build(boxes, centroids, 0, 0, static_cast<std::uint32_t>(boxes.size()));
}

// Fills node `self` with the subtree for order_[begin, end).
void Bvh::build(std::span<const Aabb> boxes, const std::vector<Vec3> &centroids, std::uint32_t self,
                std::uint32_t begin, std::uint32_t end)
{
    Aabb box;
    Aabb centroid_box;
    for (std::uint32_t i = begin; i < end; ++i)
    {
        box.expand(boxes[order_[i]]);
        centroid_box.expand(centroids[order_[i]]);
    }
    nodes_[self].box = box;

    if (end - begin <= kLeafSize)
    {
        nodes_[self].first = begin;
        nodes_[self].count = end - begin;
        return;
    }

    const Vec3 ext = centroid_box.extent();
    int axis = 0;
    if (ext.y > ext.x)
        axis = 1;
    if (ext.z > ext[axis])
        axis = 2;
    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                         if (centroids[a][axis] != centroids[b][axis])
                             return centroids[a][axis] < centroids[b][axis];
                         return a < b;
                     });

    // children are allocated as an adjacent pair before recursing; address nodes by index only
    const auto left = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    nodes_.emplace_back();
    nodes_[self].first = left;
    nodes_[self].count = 0;
    build(boxes, centroids, left, begin, mid);
    build(boxes, centroids, left + 1, mid, end);
}

} // namespace urbanrt
