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

#include <cstdint>
#include <random>

namespace urbanrt
{

/// Seeded 64-bit generator with a portable uniform conversion, so realizations are
/// reproducible bit-for-bit across standard library implementations.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ULL))) {}

    /// Uniform variate in the open interval (0, 1).
    double uniform_open()
    {
        for (;;)
        {
            const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
            if (u > 0.0)
                return u;
        }
    }

    /// Uniform variate in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * (static_cast<double>(engine_() >> 11) * 0x1.0p-53); }

  private:
    static std::uint64_t mix(std::uint64_t z)
    {
        // splitmix64 finalizer
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
};

/// Independent stream identifiers for the random draws of one realization.
enum class RngStream : std::uint64_t
{
    building_heights = 1,
    ue_positions = 2,
    ue_orientation = 3,
};

} // namespace urbanrt
