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
#include "urbanrt/channel.hpp"

#include <complex>
#include <span>
#include <vector>

namespace urbanrt
{

/// Thermal noise spectral density (W/Hz).
inline constexpr double kNoisePsd = 1e-21;
/// Default coverage threshold (dB).
inline constexpr double kCoverageThresholdDb = 10.0;

double db_to_linear(double db);
double linear_to_db(double x);

struct BandConfig
{
    double frequency_hz = 4.6e9;
    double bandwidth_hz = 60e6;
    ArrayGeometry bs_array;
    ArrayGeometry ue_array;
    double alpha = 0.57;
    double rho_max = 4.8;

    /// Carrier, bandwidth and array sizes of a supported band: 4.6/8.2/15/28 GHz with
    /// 60/200/300/400 MHz.
    static BandConfig preset(double frequency_hz);
    void validate() const;
    /// Rate ceiling B * rho_max (bit/s).
    double rate_cap() const { return bandwidth_hz * rho_max; }
    friend bool operator==(const BandConfig &, const BandConfig &) = default;
};

struct LinkBudget
{
    /// Transmit power of the serving sector (W).
    double p_t = 1.0;
    /// Serving-sector element count.
    int n_t = 1;
    /// Noise power N0 * B (W).
    double sigma_n2 = 0.0;
    /// Average interference power (W).
    double p_i_avg = 0.0;

    void validate() const;
};

/// (p_t / (n_t (sigma_n2 + p_i_avg))) * wideband_power(h).
double sinr(const ChannelMatrix &h, const LinkBudget &lb);
/// sinr with the interference term removed.
double snr(const ChannelMatrix &h, const LinkBudget &lb);

struct Interferer
{
    const ChannelMatrix *h = nullptr;
    double p_t = 1.0;
    int n_t = 1;
};

/// sum_j (p_t_j / n_t_j) (1 / n_r) wideband_power(H_j).
double interference_power(std::span<const Interferer> interferers, int n_r);

/// b * min(rho_max, alpha log2(1 + gamma)).
double rate(double gamma, const BandConfig &band);

struct Candidate
{
    int bs_id = 0;
    const ChannelMatrix *h = nullptr;
    double p_t = 1.0;
    int n_t = 1;
};

/// Candidate with the highest interference-free SINR; lowest id on ties.
int select_serving(std::span<const Candidate> candidates, double sigma_n2);

struct UeMetrics
{
    int ue_id = 0;
    double x = 0.0;
    double y = 0.0;
    /// -1 when every candidate channel is empty (outage).
    int serving_bs = -1;
    double snr = 0.0;
    double sinr = 0.0;
    double rate_bps = 0.0;
    bool covered = false;
};

/// Fraction of UEs with sinr > gamma_th (linear).
double coverage_probability(std::span<const UeMetrics> metrics, double gamma_th);

/// Receive combining weights matched to the channel collapsed over transmit elements and
/// taps, scaled so that sum |w_m|^2 = n_r.
std::vector<std::complex<double>> mrc_weights(const ChannelMatrix &h);
/// Unit-norm transmit weights matched to the channel collapsed over receive elements and taps.
std::vector<std::complex<double>> mrt_weights(const ChannelMatrix &h);

} // namespace urbanrt
