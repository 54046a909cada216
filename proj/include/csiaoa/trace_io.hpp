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

#ifndef CSIAOA_TRACE_IO_HPP
#define CSIAOA_TRACE_IO_HPP

#include "binary_io.hpp"
#include "errors.hpp"
#include "synthesizer.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace csiaoa
{
    // Contents of one receiver's CSI trace file
    struct TraceFile
    {
        int rx_id = 0;
        int num_rx = 0, num_tx = 0, num_sc = 0;
        double carrier_freq_hz = 0.0;
        double subcarrier_spacing_hz = 0.0;
        double rx_spacing_m = 0.0;
        double tx_spacing_m = 0.0;
        double packet_rate_hz = 0.0;
        std::vector<Point2> rx_coords_m;
        std::vector<CsiPacket> packets;

        ChannelConfig config() const
        {
            ChannelConfig c;
            c.carrier_freq_hz = carrier_freq_hz;
            c.subcarrier_spacing_hz = subcarrier_spacing_hz;
            c.num_subcarriers = num_sc;
            return c;
        }
    };

    inline TraceFile make_trace_file(int rx_id, const std::vector<CsiPacket> &packets, const DeviceLayout &layout,
                                     const ChannelConfig &config, double packet_rate_hz)
    {
        TraceFile f;
        f.rx_id = rx_id;
        f.num_rx = int(layout.rx_array.size());
        f.num_tx = int(layout.tx_array.size());
        f.num_sc = config.num_subcarriers;
        f.carrier_freq_hz = config.carrier_freq_hz;
        f.subcarrier_spacing_hz = config.subcarrier_spacing_hz;
        f.rx_spacing_m = layout.rx_array.spacing_m;
        f.tx_spacing_m = layout.tx_array.spacing_m;
        f.packet_rate_hz = packet_rate_hz;
        f.rx_coords_m = layout.rx_array.element_coords_m;
        f.packets = packets;
        return f;
    }

    inline std::vector<char> encode_trace(const TraceFile &t)
    {
        io::Writer w;
        w.bytes("GPC1");
        w.u32(1);
        w.u32(std::uint32_t(t.rx_id));
        w.u32(std::uint32_t(t.num_rx));
        w.u32(std::uint32_t(t.num_tx));
        w.u32(std::uint32_t(t.num_sc));
        w.f64(t.carrier_freq_hz);
        w.f64(t.subcarrier_spacing_hz);
        w.f64(t.rx_spacing_m);
        w.f64(t.tx_spacing_m);
        w.f64(t.packet_rate_hz);
        if (t.rx_coords_m.size() != std::size_t(t.num_rx))
            throw std::invalid_argument("encode_trace: antenna coordinate count does not match R.");
        for (const auto &p : t.rx_coords_m)
        {
            w.f64(p.x);
            w.f64(p.y);
        }
        w.u64(t.packets.size());
        const std::size_t n = std::size_t(t.num_rx) * std::size_t(t.num_tx) * std::size_t(t.num_sc);
        for (const auto &p : t.packets)
        {
            if (p.h.size() != n)
                throw std::invalid_argument("encode_trace: packet dimensions do not match the header.");
            w.f64(p.timestamp_s);
            for (const auto &x : p.h)
            {
                w.f32(float(x.real()));
                w.f32(float(x.imag()));
            }
        }
        return w.data();
    }

    inline void write_trace(const TraceFile &t, const std::string &path)
    {
        const auto bytes = encode_trace(t);
        io::Writer w;
        w.bytes(std::string_view(bytes.data(), bytes.size()));
        w.save(path);
    }

    inline TraceFile decode_trace(io::Reader &in)
    {
        in.expect_magic("GPC1");
        const auto version_at = in.offset();
        if (in.u32("version") != 1)
            throw format_error("unsupported trace version", version_at);
        TraceFile t;
        t.rx_id = int(in.u32("rx_id"));
        const auto dims_at = in.offset();
        t.num_rx = int(in.u32("R"));
        t.num_tx = int(in.u32("S"));
        t.num_sc = int(in.u32("V"));
        if (t.num_rx < 1 || t.num_tx < 1 || t.num_sc < 1 || t.num_rx > 64 || t.num_tx > 64 || t.num_sc > 4096)
            throw format_error("implausible trace dimensions", dims_at);
        t.carrier_freq_hz = in.f64("f_c");
        t.subcarrier_spacing_hz = in.f64("f_delta");
        t.rx_spacing_m = in.f64("d");
        t.tx_spacing_m = in.f64("d_prime");
        t.packet_rate_hz = in.f64("packet_rate");
        for (int r = 0; r < t.num_rx; ++r)
        {
            Point2 p;
            p.x = in.f64("antenna x");
            p.y = in.f64("antenna y");
            t.rx_coords_m.push_back(p);
        }
        const auto count_at = in.offset();
        const std::uint64_t count = in.u64("packet_count");
        const std::uint64_t per_packet = 8 + 8ull * std::uint64_t(t.num_rx) * std::uint64_t(t.num_tx) * std::uint64_t(t.num_sc);
        if (count > in.remaining() / per_packet || in.remaining() != count * per_packet)
            throw format_error("payload length does not match packet_count " + std::to_string(count), count_at);
        t.packets.reserve(std::size_t(count));
        for (std::uint64_t k = 0; k < count; ++k)
        {
            CsiPacket p(t.rx_id, in.f64("timestamp"), t.num_rx, t.num_tx, t.num_sc);
            for (auto &x : p.h)
            {
                const double re = in.f32("csi re");
                const double im = in.f32("csi im");
                x = cd(re, im);
            }
            t.packets.push_back(std::move(p));
        }
        return t;
    }

    inline TraceFile read_trace(const std::string &path)
    {
        io::Reader in = io::Reader::from_file(path);
        return decode_trace(in);
    }

    // Skeleton labels: "timestamp x y z ... " with 14 joints per line

    inline std::string format_label_line(const SkeletonFrame &f)
    {
        std::ostringstream os;
        os.imbue(std::locale::classic());
        os << std::setprecision(17) << f.timestamp_s;
        for (const auto &j : f.joints_m)
            os << ' ' << j.x() << ' ' << j.y() << ' ' << j.z();
        return os.str();
    }

    inline void write_labels(const std::vector<SkeletonFrame> &frames, const std::string &path)
    {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f)
            throw std::runtime_error("cannot open '" + path + "' for writing.");
        for (const auto &fr : frames)
            f << format_label_line(fr) << '\n';
        if (!f)
            throw std::runtime_error("write to '" + path + "' failed.");
    }

    inline SkeletonFrame parse_label_line(const std::string &line, std::uint64_t line_no = 0)
    {
        double vals[1 + 3 * num_joints];
        const char *p = line.data();
        const char *end = p + line.size();
        for (int i = 0; i < 1 + 3 * num_joints; ++i)
        {
            while (p < end && *p == ' ')
                ++p;
            const auto res = std::from_chars(p, end, vals[i]);
            if (res.ec != std::errc())
                throw format_error("label line " + std::to_string(line_no) + ": expected 43 numeric fields", std::uint64_t(p - line.data()));
            p = res.ptr;
        }
        while (p < end && *p == ' ')
            ++p;
        if (p != end)
            throw format_error("label line " + std::to_string(line_no) + ": trailing characters", std::uint64_t(p - line.data()));
        SkeletonFrame f;
        f.timestamp_s = vals[0];
        for (int j = 0; j < num_joints; ++j)
            f.joints_m[std::size_t(j)] = Vec3(vals[1 + 3 * j], vals[2 + 3 * j], vals[3 + 3 * j]);
        return f;
    }

    inline std::vector<SkeletonFrame> read_labels(const std::string &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw format_error("cannot open '" + path + "'", 0);
        std::vector<SkeletonFrame> out;
        std::string line;
        std::uint64_t n = 0;
        while (std::getline(f, line))
        {
            ++n;
            if (line.empty())
                continue;
            out.push_back(parse_label_line(line, n));
        }
        return out;
    }
}

#endif
