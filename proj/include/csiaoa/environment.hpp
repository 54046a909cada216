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

#ifndef CSIAOA_ENVIRONMENT_HPP
#define CSIAOA_ENVIRONMENT_HPP

#include "spectrum.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace csiaoa
{
    struct StaticProfile
    {
        AoaSpectrum spectrum;
        int source_packet_count = 0;
        double created_at_s = 0.0;
    };

    enum class ProfileAverage
    {
        mean,
        median
    };

    // Combines per-window spectra of one receiver. The mean is a running mean so that
    // identical windows reproduce their spectrum exactly.
    inline AoaSpectrum average_spectra(const std::vector<AoaSpectrum> &windows, ProfileAverage mode = ProfileAverage::mean)
    {
        if (windows.empty())
            throw std::invalid_argument("average_spectra: no spectra.");
        for (const auto &w : windows)
            if (!(w.grid.azimuth_deg == windows.front().grid.azimuth_deg) ||
                !(w.grid.elevation_deg == windows.front().grid.elevation_deg) || w.values.size() != windows.front().values.size())
                throw std::invalid_argument("average_spectra: spectra on different grids.");

        AoaSpectrum out = windows.front();
        if (mode == ProfileAverage::mean)
        {
            for (std::size_t i = 1; i < windows.size(); ++i)
                for (std::size_t c = 0; c < out.values.size(); ++c)
                    out.values[c] += (windows[i].values[c] - out.values[c]) / double(i + 1);
        }
        else
        {
            std::vector<double> column(windows.size());
            for (std::size_t c = 0; c < out.values.size(); ++c)
            {
                for (std::size_t i = 0; i < windows.size(); ++i)
                    column[i] = windows[i].values[c];
                std::sort(column.begin(), column.end());
                const std::size_t m = column.size() / 2;
                out.values[c] = column.size() % 2 ? column[m] : 0.5 * (column[m - 1] + column[m]);
            }
        }
        return out;
    }

    // Empty-scene profile per receiver: spectra of consecutive non-overlapping windows,
    // averaged. A trailing partial window is dropped unless it is the only one.
    inline std::map<int, StaticProfile> build_static_profile(const std::map<int, std::vector<CsiPacket>> &empty_scene,
                                                             const DeviceLayout &layout, const ChannelConfig &config,
                                                             const EstimatorConfig &est,
                                                             ProfileAverage mode = ProfileAverage::mean)
    {
        if (empty_scene.empty())
            throw std::invalid_argument("build_static_profile: no receivers.");
        if (est.packets_per_window < 1)
            throw std::invalid_argument("build_static_profile: packets_per_window must be positive.");
        std::map<int, StaticProfile> out;
        for (const auto &[rx_id, packets] : empty_scene)
        {
            if (packets.empty())
                throw std::invalid_argument("build_static_profile: receiver " + std::to_string(rx_id) + " has no packets.");
            const std::size_t W = std::size_t(est.packets_per_window);
            const std::size_t windows = std::max<std::size_t>(1, packets.size() / W);
            std::vector<AoaSpectrum> spectra;
            for (std::size_t w = 0; w < windows; ++w)
            {
                const auto begin = packets.begin() + std::ptrdiff_t(w * W);
                const auto end = packets.begin() + std::ptrdiff_t(std::min(packets.size(), (w + 1) * W));
                spectra.push_back(estimate_spectrum(std::vector<CsiPacket>(begin, end), layout, config, est));
            }
            StaticProfile p;
            p.spectrum = average_spectra(spectra, mode);
            p.spectrum.rx_id = rx_id;
            p.spectrum.packet_index = 0;
            p.source_packet_count = int(std::min(packets.size(), windows * W));
            p.created_at_s = packets.front().timestamp_s;
            out[rx_id] = std::move(p);
        }
        return out;
    }

    // max(live - profile, 0) cell by cell
    inline AoaSpectrum subtract_static(const AoaSpectrum &live, const StaticProfile &profile)
    {
        const AoaSpectrum &base = profile.spectrum;
        if (!(live.grid.azimuth_deg == base.grid.azimuth_deg) || !(live.grid.elevation_deg == base.grid.elevation_deg) ||
            live.values.size() != base.values.size())
            throw std::invalid_argument("subtract_static: live spectrum and profile are on different grids.");
        if (live.rx_id != base.rx_id)
            throw std::invalid_argument("subtract_static: profile belongs to receiver " + std::to_string(base.rx_id) +
                                        ", spectrum to receiver " + std::to_string(live.rx_id) + ".");
        AoaSpectrum out = live;
        for (std::size_t i = 0; i < out.values.size(); ++i)
            out.values[i] = std::max(live.values[i] - base.values[i], 0.0);
        return out;
    }
}

#endif
