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
#include "urbanrt/channel.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace urbanrt
{

ChannelMatrix::ChannelMatrix(int n_r, int n_t, int n_paths) : n_r_(n_r), n_t_(n_t), n_paths_(n_paths)
{
    if (n_r < 1 || n_t < 1 || n_paths < 0)
        throw std::invalid_argument("channel dimensions must be positive");
    taps_.resize(static_cast<std::size_t>(n_r) * static_cast<std::size_t>(n_t) * static_cast<std::size_t>(n_paths));
}

ChannelMatrix assemble_channel(std::span<const Path> paths, const AntennaConfig &tx, const AntennaConfig &rx,
                               double frequency_hz)
{
    const double lambda = wavelength(frequency_hz);
    const int n_paths = static_cast<int>(paths.size());
    ChannelMatrix h(rx.geometry.size(), tx.geometry.size(), n_paths);
    for (int i = 0; i < n_paths; ++i)
    {
        const Path &p = paths[static_cast<std::size_t>(i)];
        const double gain = std::sqrt(tx.element_gain_linear(p.departure) * rx.element_gain_linear(p.arrival));
        const std::complex<double> a = std::polar(p.amp * gain, p.phase_rad);
        const auto s_tx = steering(tx.geometry, p.departure, lambda);
        const auto s_rx = steering(rx.geometry, p.arrival, lambda);
        for (int m = 0; m < h.n_r(); ++m)
            for (int n = 0; n < h.n_t(); ++n)
                h.tap(m, n, i) = {a * s_tx[static_cast<std::size_t>(n)] * s_rx[static_cast<std::size_t>(m)], p.delay_s};
    }
    return h;
}

double wideband_power(const ChannelMatrix &h)
{
    double sum = 0.0;
    for (const Tap &t : h.taps())
        sum += std::norm(t.amp);
    return sum;
}

double rms_delay_spread(const ChannelMatrix &h)
{
    double p = 0.0;
    double m1 = 0.0;
    for (const Tap &t : h.taps())
    {
        const double w = std::norm(t.amp);
        p += w;
        m1 += w * t.delay_s;
    }
    if (!(p > 0.0))
        throw std::domain_error("delay spread of an all-zero channel is undefined");
    const double mean = m1 / p;
    double m2 = 0.0;
    for (const Tap &t : h.taps())
        m2 += std::norm(t.amp) * (t.delay_s - mean) * (t.delay_s - mean);
    return std::sqrt(m2 / p);
}

double coherence_bandwidth(double tau_rms_s)
{
    if (!(tau_rms_s > 0.0))
        throw std::invalid_argument("RMS delay spread must be positive");
    return 1.0 / (5.0 * tau_rms_s);
}

void write_channel_csv(std::ostream &out, const ChannelMatrix &h)
{
    out << "m,n,path,amp_db,phase_deg,delay_ns\n";
    for (int m = 0; m < h.n_r(); ++m)
        for (int n = 0; n < h.n_t(); ++n)
            for (int i = 0; i < h.n_paths(); ++i)
            {
                const Tap &t = h.tap(m, n, i);
                out << m << ',' << n << ',' << i << ',' << 20.0 * std::log10(std::abs(t.amp)) << ','
                    << rad2deg(std::arg(t.amp)) << ',' << t.delay_s * 1e9 << '\n';
            }
}

} // namespace urbanrt
