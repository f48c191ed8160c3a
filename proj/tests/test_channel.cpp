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
#include "oracles.hpp"

#include "urbanrt/channel.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace urbanrt;

namespace
{

Path los_path(double d, double f)
{
    Path p;
    p.length_m = d;
    p.departure = {1, 0, 0};
    p.arrival = {-1, 0, 0};
    const double lambda = oracle::kC / f;
    p.amp = lambda / (4.0 * oracle::kPi * d);
    p.phase_rad = std::remainder(-2.0 * oracle::kPi * d / lambda, 2.0 * oracle::kPi);
    p.delay_s = d / oracle::kC;
    return p;
}

AntennaConfig iso(int rows, int cols, ArrayKind kind = ArrayKind::ula)
{
    AntennaConfig a;
    a.geometry.kind = kind;
    a.geometry.rows = rows;
    a.geometry.cols = cols;
    a.element = ElementPattern::isotropic();
    return a;
}

ChannelMatrix taps(int n_r, int n_t, std::initializer_list<Tap> per_entry)
{
    ChannelMatrix h(n_r, n_t, static_cast<int>(per_entry.size()));
    for (int m = 0; m < n_r; ++m)
        for (int n = 0; n < n_t; ++n)
        {
            int i = 0;
            for (const Tap &t : per_entry)
                h.tap(m, n, i++) = t;
        }
    return h;
}

} // namespace

TEST(Channel, FriisSingleElement)
{
    const double f = 15e9;
    const std::vector<Path> paths{los_path(250.0, f)};
    const ChannelMatrix h = assemble_channel(paths, iso(1, 1), iso(1, 1), f);
    ASSERT_EQ(h.n_paths(), 1);
    EXPECT_NEAR(std::abs(h.tap(0, 0, 0).amp), oracle::kC / f / (4.0 * oracle::kPi * 250.0), 1e-18);
    EXPECT_DOUBLE_EQ(h.tap(0, 0, 0).delay_s, 250.0 / oracle::kC);
}

TEST(Channel, BroadsideUlaTapsEqual)
{
    const double f = 4.6e9;
    Path p = los_path(80.0, f);
    p.arrival = {1, 0, 0}; // array boresight
    const std::vector<Path> paths{p};
    const ChannelMatrix h = assemble_channel(paths, iso(1, 1), iso(1, 2), f);
    ASSERT_EQ(h.n_r(), 2);
    EXPECT_NEAR(std::abs(h.tap(0, 0, 0).amp - h.tap(1, 0, 0).amp), 0.0, 1e-18);
}

TEST(Channel, UraTapsMatchPerElementSum)
{
    const double f = 8.2e9;
    const double lambda = oracle::kC / f;
    Path p = los_path(120.0, f);
    p.departure = Vec3{0.7, -0.4, -0.3}.normalized();
    p.arrival = Vec3{0.5, 0.8, 0.2}.normalized();
    p.phase_rad = 0.37;
    const std::vector<Path> paths{p};
    const AntennaConfig tx = iso(3, 3, ArrayKind::ura);
    const AntennaConfig rx = iso(1, 3);
    const ChannelMatrix h = assemble_channel(paths, tx, rx, f);
    const std::complex<double> j(0, 1);
    auto phase = [&](int r, int c, Vec3 u) {
        const Vec3 off{0.0, c * 0.5 * lambda, r * 0.5 * lambda};
        return std::exp(j * 2.0 * oracle::kPi / lambda * dot(off, u));
    };
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 9; ++n)
        {
            const auto want = std::polar(p.amp, p.phase_rad) * phase(n / 3, n % 3, p.departure) * phase(0, m, p.arrival);
            EXPECT_NEAR(std::abs(h.tap(m, n, 0).amp - want), 0.0, 1e-12 * p.amp) << m << "," << n;
        }
}

TEST(Channel, ElementGainScalesAmplitude)
{
    const double f = 28e9;
    AntennaConfig tx = iso(1, 1);
    tx.element = ElementPattern::sector();
    const std::vector<Path> paths{los_path(50.0, f)};
    const ChannelMatrix h = assemble_channel(paths, tx, iso(1, 1), f);
    EXPECT_NEAR(std::norm(h.tap(0, 0, 0).amp) / (paths[0].amp * paths[0].amp), 1000.0, 1e-9);
}

TEST(Channel, EmptyPathListIsZeroChannel)
{
    const ChannelMatrix h = assemble_channel({}, iso(3, 3, ArrayKind::ura), iso(1, 2), 8.2e9);
    EXPECT_EQ(h.n_r(), 2);
    EXPECT_EQ(h.n_t(), 9);
    EXPECT_EQ(h.n_paths(), 0);
    EXPECT_EQ(wideband_power(h), 0.0);
    EXPECT_THROW(rms_delay_spread(h), std::domain_error);
}

TEST(WidebandPower, Examples)
{
    EXPECT_EQ(wideband_power(taps(2, 2, {{0.0, 0.0}})), 0.0);
    EXPECT_DOUBLE_EQ(wideband_power(taps(2, 2, {{1.0, 0.0}})), 4.0);
    EXPECT_DOUBLE_EQ(wideband_power(taps(1, 1, {{{0.6, 0.8}, 0.0}, {2.0, 1e-7}})), 5.0);
}

TEST(DelaySpread, Examples)
{
    EXPECT_EQ(rms_delay_spread(taps(1, 1, {{1.0, 5e-7}})), 0.0);
    EXPECT_NEAR(rms_delay_spread(taps(2, 3, {{1.0, 0.0}, {{0.0, 1.0}, 200e-9}})), 100e-9, 1e-18);
    // unequal powers: weights 1 and 3 at 0 and 100 ns give sqrt(0.1875) * 100 ns
    EXPECT_NEAR(rms_delay_spread(taps(1, 1, {{1.0, 0.0}, {std::sqrt(3.0), 100e-9}})), std::sqrt(0.1875) * 100e-9,
                1e-18);
}

TEST(CoherenceBandwidth, Examples)
{
    EXPECT_NEAR(coherence_bandwidth(490e-9), 408.16e3, 0.1e3);
    EXPECT_NEAR(coherence_bandwidth(74.5e-9), 2.68e6, 0.005e6);
    EXPECT_DOUBLE_EQ(coherence_bandwidth(100e-9), 2e6);
    EXPECT_THROW(coherence_bandwidth(0.0), std::invalid_argument);
    EXPECT_THROW(coherence_bandwidth(-1e-9), std::invalid_argument);
}

TEST(Channel, DimensionsValidated)
{
    EXPECT_THROW(ChannelMatrix(0, 1, 1), std::invalid_argument);
    EXPECT_THROW(ChannelMatrix(1, 0, 1), std::invalid_argument);
    EXPECT_THROW(ChannelMatrix(1, 1, -1), std::invalid_argument);
}

TEST(Channel, CsvRows)
{
    std::ostringstream out;
    write_channel_csv(out, taps(1, 2, {{1.0, 1e-6}}));
    EXPECT_EQ(out.str(), "m,n,path,amp_db,phase_deg,delay_ns\n0,0,0,0,0,1000\n0,1,0,0,0,1000\n");
}
