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

#include "urbanrt/antenna.hpp"
#include "urbanrt/ray_engine.hpp"

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

namespace urbanrt
{

struct Tap
{
    std::complex<double> amp;
    double delay_s = 0.0;
};

/// Wideband MIMO channel: for every (rx element m, tx element n) one tap per path, all
/// entries sharing the same path list.
class ChannelMatrix
{
  public:
    ChannelMatrix() = default;
    ChannelMatrix(int n_r, int n_t, int n_paths);

    int n_r() const { return n_r_; }
    int n_t() const { return n_t_; }
    int n_paths() const { return n_paths_; }

    Tap &tap(int m, int n, int i) { return taps_[index(m, n, i)]; }
    const Tap &tap(int m, int n, int i) const { return taps_[index(m, n, i)]; }
    std::span<const Tap> taps() const { return taps_; }

  private:
    std::size_t index(int m, int n, int i) const
    {
        return (static_cast<std::size_t>(m) * static_cast<std::size_t>(n_t_) + static_cast<std::size_t>(n)) *
                   static_cast<std::size_t>(n_paths_) +
               static_cast<std::size_t>(i);
    }

    int n_r_ = 0;
    int n_t_ = 0;
    int n_paths_ = 0;
    std::vector<Tap> taps_;
};

/// tap(m, n, i) = A_i sqrt(g_tx(aod_i) g_rx(aoa_i)) exp(j psi_i) s_tx,n(aod_i) s_rx,m(aoa_i),
/// delay tau_i. Plane-wave approximation: one departure and arrival direction per path.
ChannelMatrix assemble_channel(std::span<const Path> paths, const AntennaConfig &tx, const AntennaConfig &rx,
                               double frequency_hz);

/// Sum over all entries and taps of |tap|^2.
double wideband_power(const ChannelMatrix &h);

/// Power-weighted standard deviation of tap delays pooled over all entries.
/// Throws std::domain_error for an all-zero channel.
double rms_delay_spread(const ChannelMatrix &h);

/// B_c = 1 / (5 tau_rms). Throws std::invalid_argument for tau_rms <= 0.
double coherence_bandwidth(double tau_rms_s);

/// CSV rows: m, n, path, amp_db, phase_deg, delay_ns.
void write_channel_csv(std::ostream &out, const ChannelMatrix &h);

} // namespace urbanrt
