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

#ifndef CSIAOA_FUSION_HPP
#define CSIAOA_FUSION_HPP

#include "binary_io.hpp"
#include "environment.hpp"
#include "errors.hpp"
#include "spectrum.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace csiaoa
{
    inline constexpr std::uint32_t tensor_flag_static = 1u;

    // Dense float tensor with the spectrum grid metadata carried by the file format
    struct Tensor
    {
        std::vector<std::uint32_t> dims;
        std::uint32_t flags = 0;
        double az_start_deg = 0.0, az_step_deg = 1.0;
        double el_start_deg = 0.0, el_step_deg = 1.0;
        double window_start_time_s = 0.0;
        std::vector<float> values; // row-major, last axis fastest

        std::size_t element_count() const
        {
            return std::accumulate(dims.begin(), dims.end(), std::size_t(1),
                                   [](std::size_t a, std::uint32_t b)
                                   { return a * std::size_t(b); });
        }

        // Bitwise equality, so NaN payloads and signed zeros are compared exactly
        friend bool operator==(const Tensor &a, const Tensor &b)
        {
            auto same = [](double x, double y)
            { return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y); };
            if (a.dims != b.dims || a.flags != b.flags || !same(a.az_start_deg, b.az_start_deg) ||
                !same(a.az_step_deg, b.az_step_deg) || !same(a.el_start_deg, b.el_start_deg) ||
                !same(a.el_step_deg, b.el_step_deg) || !same(a.window_start_time_s, b.window_start_time_s) ||
                a.values.size() != b.values.size())
                return false;
            for (std::size_t i = 0; i < a.values.size(); ++i)
                if (std::bit_cast<std::uint32_t>(a.values[i]) != std::bit_cast<std::uint32_t>(b.values[i]))
                    return false;
            return true;
        }
    };

    // Stacked spectra of one window: shape (az, el, P * N_rx), channel = rx_index * P + packet
    struct FusionTensor
    {
        Tensor data;
        int packet_window = 0;
        int num_receivers = 0;
        std::vector<int> rx_ids; // ascending; empty when read back from a file

        std::array<std::uint32_t, 3> shape() const { return {data.dims.at(0), data.dims.at(1), data.dims.at(2)}; }
        float at(int a, int e, int k) const
        {
            return data.values[(std::size_t(a) * data.dims[1] + std::size_t(e)) * data.dims[2] + std::size_t(k)];
        }
    };

    inline FusionTensor fuse_window(const std::map<int, std::vector<AoaSpectrum>> &spectra, double window_start_time_s = 0.0)
    {
        if (spectra.empty())
            throw std::invalid_argument("fuse_window: no receivers.");
        const auto &first = spectra.begin()->second;
        if (first.empty())
            throw std::invalid_argument("fuse_window: receiver " + std::to_string(spectra.begin()->first) + " has no spectra.");
        const std::size_t P = first.size();
        const ParamGrid &grid = first.front().grid;
        const int A = grid.azimuth_deg.count, E = grid.elevation_deg.count;
        for (const auto &[rx_id, list] : spectra)
        {
            if (list.size() != P)
                throw std::invalid_argument("fuse_window: receiver " + std::to_string(rx_id) + " has " +
                                            std::to_string(list.size()) + " spectra, expected " + std::to_string(P) + ".");
            for (const auto &s : list)
                if (!(s.grid.azimuth_deg == grid.azimuth_deg) || !(s.grid.elevation_deg == grid.elevation_deg) ||
                    s.values.size() != std::size_t(A) * std::size_t(E))
                    throw std::invalid_argument("fuse_window: receiver " + std::to_string(rx_id) + " uses a different grid.");
        }

        FusionTensor out;
        out.packet_window = int(P);
        out.num_receivers = int(spectra.size());
        const std::size_t C = P * spectra.size();
        out.data.dims = {std::uint32_t(A), std::uint32_t(E), std::uint32_t(C)};
        out.data.az_start_deg = grid.azimuth_deg.start;
        out.data.az_step_deg = grid.azimuth_deg.step;
        out.data.el_start_deg = grid.elevation_deg.start;
        out.data.el_step_deg = grid.elevation_deg.step;
        out.data.window_start_time_s = window_start_time_s;
        out.data.values.resize(std::size_t(A) * std::size_t(E) * C);

        std::size_t rx_index = 0;
        for (const auto &[rx_id, list] : spectra) // std::map iterates by ascending rx_id
        {
            out.rx_ids.push_back(rx_id);
            for (std::size_t p = 0; p < P; ++p)
            {
                const std::size_t k = rx_index * P + p;
                const auto &src = list[p].values;
                for (std::size_t cell = 0; cell < src.size(); ++cell)
                    out.data.values[cell * C + k] = float(src[cell]);
            }
            ++rx_index;
        }
        return out;
    }

    inline std::vector<char> encode_tensor(const Tensor &t)
    {
        if (t.values.size() != t.element_count())
            throw std::invalid_argument("encode_tensor: value count does not match dims.");
        io::Writer w;
        w.bytes("GPS1");
        w.u32(1);
        w.u32(std::uint32_t(t.dims.size()));
        for (auto d : t.dims)
            w.u32(d);
        w.u32(t.flags);
        w.f64(t.az_start_deg);
        w.f64(t.az_step_deg);
        w.f64(t.el_start_deg);
        w.f64(t.el_step_deg);
        w.f64(t.window_start_time_s);
        for (float x : t.values)
            w.f32(x);
        return w.data();
    }

    inline Tensor decode_tensor(io::Reader &in)
    {
        in.expect_magic("GPS1");
        const auto version_at = in.offset();
        if (in.u32("version") != 1)
            throw format_error("unsupported tensor version", version_at);
        const auto ndims_at = in.offset();
        const std::uint32_t ndims = in.u32("ndims");
        if (ndims == 0 || ndims > 16)
            throw format_error("implausible tensor rank " + std::to_string(ndims), ndims_at);
        Tensor t;
        for (std::uint32_t i = 0; i < ndims; ++i)
            t.dims.push_back(in.u32("dims"));
        t.flags = in.u32("flags");
        t.az_start_deg = in.f64("az_start_deg");
        t.az_step_deg = in.f64("az_step_deg");
        t.el_start_deg = in.f64("el_start_deg");
        t.el_step_deg = in.f64("el_step_deg");
        t.window_start_time_s = in.f64("window_start_time_s");

        const auto payload_at = in.offset();
        std::uint64_t count = 1;
        for (auto d : t.dims)
        {
            if (d != 0 && count > (std::uint64_t(1) << 40) / d)
                throw format_error("tensor dims overflow", payload_at);
            count *= d;
        }
        if (in.remaining() != count * 4)
            throw format_error("payload length " + std::to_string(in.remaining()) + " bytes does not match dims (" +
                                   std::to_string(count * 4) + " bytes expected)",
                               payload_at);
        t.values.resize(std::size_t(count));
        for (auto &x : t.values)
            x = in.f32("values");
        return t;
    }

    inline void write_tensor(const Tensor &t, const std::string &path)
    {
        const std::vector<char> bytes = encode_tensor(t);
        io::Writer w;
        w.bytes(std::string_view(bytes.data(), bytes.size()));
        w.save(path);
    }

    inline Tensor read_tensor(const std::string &path)
    {
        io::Reader in = io::Reader::from_file(path);
        return decode_tensor(in);
    }

    inline void write_tensor(const FusionTensor &t, const std::string &path) { write_tensor(t.data, path); }

    // Reads a fused tensor; the file stores only the shape, so the receiver count is supplied
    inline FusionTensor read_fusion_tensor(const std::string &path, int num_receivers)
    {
        FusionTensor out;
        out.data = read_tensor(path);
        if (out.data.dims.size() != 3)
            throw format_error("fusion tensor must have 3 dims, found " + std::to_string(out.data.dims.size()), 8);
        if (num_receivers < 1 || out.data.dims[2] % std::uint32_t(num_receivers) != 0)
            throw std::invalid_argument("read_fusion_tensor: channel count is not a multiple of the receiver count.");
        out.num_receivers = num_receivers;
        out.packet_window = int(out.data.dims[2] / std::uint32_t(num_receivers));
        return out;
    }

    // 2D spectrum as a (az, el) tensor; profiles carry the static flag
    inline Tensor spectrum_to_tensor(const AoaSpectrum &s, bool is_static = false, double time_s = 0.0)
    {
        Tensor t;
        t.dims = {std::uint32_t(s.num_az()), std::uint32_t(s.num_el())};
        t.flags = is_static ? tensor_flag_static : 0u;
        t.az_start_deg = s.grid.azimuth_deg.start;
        t.az_step_deg = s.grid.azimuth_deg.step;
        t.el_start_deg = s.grid.elevation_deg.start;
        t.el_step_deg = s.grid.elevation_deg.step;
        t.window_start_time_s = time_s;
        t.values.assign(s.values.begin(), s.values.end());
        return t;
    }

    inline AoaSpectrum tensor_to_spectrum(const Tensor &t, int rx_id = 0)
    {
        if (t.dims.size() != 2)
            throw std::invalid_argument("tensor_to_spectrum: expected a 2-dimensional tensor.");
        AoaSpectrum s;
        s.grid.azimuth_deg = {t.az_start_deg, t.az_step_deg, int(t.dims[0])};
        s.grid.elevation_deg = {t.el_start_deg, t.el_step_deg, int(t.dims[1])};
        s.values.assign(t.values.begin(), t.values.end());
        s.rx_id = rx_id;
        return s;
    }
}

#endif
