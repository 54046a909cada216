// SPDX-License-Identifier: Apache-2.0
//
// csiaoa: joint angle-of-arrival spectrum toolkit for WiFi CSI sensing
// Copyright (C) 2026 The csiaoa authors
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

#ifndef CSIAOA_CALIBRATION_HPP
#define CSIAOA_CALIBRATION_HPP

#include "errors.hpp"
#include "synthesizer.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace csiaoa
{
    // Linear phase model psi(r,s,v) ~ -(slope * v + offset)
    struct PhaseFit
    {
        double slope_rad_per_subcarrier = 0.0;
        double offset_rad = 0.0;
        double residual_rms_rad = 0.0;
        std::vector<double> chain_offsets_rad; // filled only for per-chain fits, (r,s) order
    };

    // Unwrapped phases, same (r, s, v) layout as CsiPacket
    struct PhaseTensor
    {
        int num_rx = 0, num_tx = 0, num_sc = 0;
        std::vector<double> psi;

        double operator()(int r, int s, int v) const
        {
            return psi[(std::size_t(r) * std::size_t(num_tx) + std::size_t(s)) * std::size_t(num_sc) + std::size_t(v)];
        }
    };

    struct CalibrationOptions
    {
        bool per_chain_offset = false;
    };

    // Principal phases unwrapped along the subcarrier axis of every (r, s) chain
    inline PhaseTensor unwrap_phase(const CsiPacket &packet)
    {
        PhaseTensor out{packet.num_rx, packet.num_tx, packet.num_sc, std::vector<double>(packet.h.size())};
        for (int r = 0; r < packet.num_rx; ++r)
            for (int s = 0; s < packet.num_tx; ++s)
            {
                double prev = 0.0;
                for (int v = 0; v < packet.num_sc; ++v)
                {
                    const cd x = packet(r, s, v);
                    if (x == cd(0.0, 0.0))
                        throw undefined_phase_error(r, s, v);
                    double p = std::arg(x);
                    if (v > 0)
                        p = prev + std::remainder(p - prev, 2.0 * pi);
                    out.psi[packet.offset(r, s, v)] = p;
                    prev = p;
                }
            }
        return out;
    }

    // Least-squares line through all chains against the subcarrier index.
    // The slope is shared; the offset is shared unless per_chain_offset is set.
    inline PhaseFit fit_linear_phase(const PhaseTensor &phases, const CalibrationOptions &opt = {})
    {
        const int V = phases.num_sc;
        const int chains = phases.num_rx * phases.num_tx;
        if (V < 2)
            throw std::invalid_argument("fit_linear_phase: need at least two subcarriers.");
        if (chains < 1)
            throw std::invalid_argument("fit_linear_phase: empty phase tensor.");

        // Every chain spans the same v = 0..V-1, so the slope decouples from the offsets
        const double v_mean = 0.5 * double(V - 1);
        double sxx = 0.0;
        for (int v = 0; v < V; ++v)
            sxx += (double(v) - v_mean) * (double(v) - v_mean);

        std::vector<double> chain_mean(std::size_t(chains), 0.0);
        double sxy = 0.0, total_mean = 0.0;
        for (int c = 0; c < chains; ++c)
        {
            const double *psi = phases.psi.data() + std::size_t(c) * std::size_t(V);
            for (int v = 0; v < V; ++v)
            {
                sxy += (double(v) - v_mean) * psi[v];
                chain_mean[std::size_t(c)] += psi[v];
            }
            chain_mean[std::size_t(c)] /= double(V);
            total_mean += chain_mean[std::size_t(c)];
        }
        total_mean /= double(chains);

        const double m = sxy / (sxx * double(chains));
        PhaseFit fit;
        fit.slope_rad_per_subcarrier = -m;
        fit.offset_rad = -(total_mean - m * v_mean);

        double sse = 0.0;
        for (int c = 0; c < chains; ++c)
        {
            const double b = (opt.per_chain_offset ? chain_mean[std::size_t(c)] : total_mean) - m * v_mean;
            if (opt.per_chain_offset)
                fit.chain_offsets_rad.push_back(-b);
            const double *psi = phases.psi.data() + std::size_t(c) * std::size_t(V);
            for (int v = 0; v < V; ++v)
            {
                const double e = psi[v] - (m * double(v) + b);
                sse += e * e;
            }
        }
        fit.residual_rms_rad = std::sqrt(sse / double(chains * V));
        return fit;
    }

    // Removes the fitted linear phase across subcarriers. The common offset stays.
    inline CsiPacket calibrate_packet(const CsiPacket &packet, const CalibrationOptions &opt = {})
    {
        const PhaseFit fit = fit_linear_phase(unwrap_phase(packet), opt);
        CsiPacket out = packet;
        if (fit.slope_rad_per_subcarrier == 0.0)
            return out;
        for (int v = 0; v < packet.num_sc; ++v)
        {
            const cd rot = std::polar(1.0, fit.slope_rad_per_subcarrier * double(v));
            for (int r = 0; r < packet.num_rx; ++r)
                for (int s = 0; s < packet.num_tx; ++s)
                    out(r, s, v) *= rot;
        }
        return out;
    }

    inline std::vector<CsiPacket> calibrate_packets(const std::vector<CsiPacket> &packets, const CalibrationOptions &opt = {})
    {
        std::vector<CsiPacket> out;
        out.reserve(packets.size());
        for (const auto &p : packets)
            out.push_back(calibrate_packet(p, opt));
        return out;
    }
}

#endif
