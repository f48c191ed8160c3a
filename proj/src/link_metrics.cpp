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
#include "urbanrt/link_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace urbanrt
{

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

double linear_to_db(double x)
{
    return 10.0 * std::log10(x);
}

BandConfig BandConfig::preset(double frequency_hz)
{
    static constexpr double kBandwidthMhz[] = {60.0, 200.0, 300.0, 400.0};
    const int b = band_index(frequency_hz);
    BandConfig c;
    c.frequency_hz = std::round(kSupportedBandsGhz[b] * 1e9); // whole hertz, so 8.2 GHz == 8.2e9
    c.bandwidth_hz = kBandwidthMhz[b] * 1e6;
    c.bs_array = aperture_config(c.frequency_hz, Role::bs);
    c.ue_array = aperture_config(c.frequency_hz, Role::ue);
    return c;
}

void BandConfig::validate() const
{
    band_index(frequency_hz);
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("bandwidth must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("alpha must lie in (0, 1]");
    if (!(rho_max > 0.0))
        throw std::invalid_argument("rho_max must be positive");
    bs_array.validate();
    ue_array.validate();
}

void LinkBudget::validate() const
{
    if (!(p_t > 0.0))
        throw std::invalid_argument("transmit power must be positive");
    if (n_t < 1)
        throw std::invalid_argument("n_t must be at least 1");
    if (!(sigma_n2 > 0.0))
        throw std::invalid_argument("noise power must be positive");
    if (!(p_i_avg >= 0.0))
        throw std::invalid_argument("interference power must be non-negative");
}

double sinr(const ChannelMatrix &h, const LinkBudget &lb)
{
    lb.validate();
    return lb.p_t / (lb.n_t * (lb.sigma_n2 + lb.p_i_avg)) * wideband_power(h);
}

double snr(const ChannelMatrix &h, const LinkBudget &lb)
{
    LinkBudget free = lb;
    free.p_i_avg = 0.0;
    return sinr(h, free);
}

double interference_power(std::span<const Interferer> interferers, int n_r)
{
    if (n_r < 1)
        throw std::invalid_argument("n_r must be at least 1");
    double sum = 0.0;
    for (const Interferer &j : interferers)
    {
        if (j.h->n_r() != n_r)
            throw std::invalid_argument("interferer channel has the wrong receive dimension");
        sum += j.p_t / j.n_t / n_r * wideband_power(*j.h);
    }
    return sum;
}

double rate(double gamma, const BandConfig &band)
{
    if (!(gamma >= 0.0))
        throw std::invalid_argument("SINR must be non-negative");
    return band.bandwidth_hz * std::min(band.rho_max, band.alpha * std::log2(1.0 + gamma));
}

int select_serving(std::span<const Candidate> candidates, double sigma_n2)
{
    if (candidates.empty())
        throw std::invalid_argument("no serving candidates");
    int best = -1;
    double best_value = -1.0;
    for (const Candidate &c : candidates)
    {
        const double value = snr(*c.h, {c.p_t, c.n_t, sigma_n2, 0.0});
        if (value > best_value || (value == best_value && c.bs_id < best))
        {
            best = c.bs_id;
            best_value = value;
        }
    }
    return best;
}

double coverage_probability(std::span<const UeMetrics> metrics, double gamma_th)
{
    if (metrics.empty())
        throw std::invalid_argument("no UE metrics");
    const auto covered = std::count_if(metrics.begin(), metrics.end(),
                                       [gamma_th](const UeMetrics &m) { return m.sinr > gamma_th; });
    return static_cast<double>(covered) / static_cast<double>(metrics.size());
}

namespace
{

std::vector<std::complex<double>> matched(std::vector<std::complex<double>> h, double norm2)
{
    double energy = 0.0;
    for (const auto &x : h)
        energy += std::norm(x);
    if (!(energy > 0.0))
    {
        // no channel to match: uniform weights with the requested norm
        const double v = std::sqrt(norm2 / static_cast<double>(h.size()));
        std::fill(h.begin(), h.end(), std::complex<double>(v, 0.0));
        return h;
    }
    const double scale = std::sqrt(norm2 / energy);
    for (auto &x : h)
        x = std::conj(x) * scale;
    return h;
}

} // namespace

std::vector<std::complex<double>> mrc_weights(const ChannelMatrix &h)
{
    std::vector<std::complex<double>> g(static_cast<std::size_t>(h.n_r()));
    for (int m = 0; m < h.n_r(); ++m)
        for (int n = 0; n < h.n_t(); ++n)
            for (int i = 0; i < h.n_paths(); ++i)
                g[static_cast<std::size_t>(m)] += h.tap(m, n, i).amp;
    return matched(std::move(g), static_cast<double>(h.n_r()));
}

std::vector<std::complex<double>> mrt_weights(const ChannelMatrix &h)
{
    std::vector<std::complex<double>> g(static_cast<std::size_t>(h.n_t()));
    for (int m = 0; m < h.n_r(); ++m)
        for (int n = 0; n < h.n_t(); ++n)
            for (int i = 0; i < h.n_paths(); ++i)
                g[static_cast<std::size_t>(n)] += h.tap(m, n, i).amp;
    return matched(std::move(g), 1.0);
}

} // namespace urbanrt
