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

#ifndef CSIAOA_MODEL_HPP
#define CSIAOA_MODEL_HPP

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace csiaoa
{
    using Vec3 = Eigen::Vector3d;

    inline constexpr double pi = std::numbers::pi;

    // Sine of an angle in degrees. The argument is reduced by symmetry to [0, 90] before
    // evaluation, so sin_deg(x) and sin_deg(180 - x) are bit-identical and the common
    // exact values (0, 30, 90) come out exact.
    inline double sin_deg(double deg)
    {
        double r = std::fmod(deg, 360.0);
        if (r < 0.0)
            r += 360.0;
        bool negative = false;
        if (r >= 180.0)
        {
            r -= 180.0;
            negative = true;
        }
        if (r > 90.0)
            r = 180.0 - r;

        double s;
        if (r == 0.0)
            s = 0.0;
        else if (r == 30.0)
            s = 0.5;
        else if (r == 90.0)
            s = 1.0;
        else
            s = std::sin(r * (pi / 180.0));
        return negative ? -s : s;
    }

    inline double cos_deg(double deg) { return sin_deg(deg + 90.0); }

    inline double deg_from_rad(double rad) { return rad * (180.0 / pi); }

    // Carrier and OFDM subcarrier layout of one WiFi channel
    struct ChannelConfig
    {
        static constexpr double speed_of_light = 299792458.0; // m/s

        double carrier_freq_hz = 5.32e9;
        double subcarrier_spacing_hz = 1.25e6; // 30 reported groups across 40 MHz
        int num_subcarriers = 30;

        double wavelength_m() const { return speed_of_light / carrier_freq_hz; }

        // 2*pi*f/c, the phase per meter of path difference
        double wavenumber() const { return 2.0 * pi * carrier_freq_hz / speed_of_light; }
    };

    struct Point2
    {
        double x = 0.0;
        double y = 0.0;

        bool operator==(const Point2 &) const = default;
    };

    enum class ArrayKind
    {
        linear_tx,
        l_shaped_rx
    };

    // Element positions of an antenna array in its own plane (meters)
    struct ArrayGeometry
    {
        ArrayKind kind = ArrayKind::linear_tx;
        std::vector<Point2> element_coords_m;
        double spacing_m = 0.0;

        std::size_t size() const { return element_coords_m.size(); }
    };

    // Three receive antennas at (0,0), (d,0), (0,d); the antenna at the origin is shared by both axes
    inline ArrayGeometry l_shaped_array(double spacing_m)
    {
        if (!(spacing_m > 0.0) || !std::isfinite(spacing_m))
            throw std::invalid_argument("l_shaped_array: spacing must be positive and finite.");
        return ArrayGeometry{ArrayKind::l_shaped_rx, {{0.0, 0.0}, {spacing_m, 0.0}, {0.0, spacing_m}}, spacing_m};
    }

    // Uniform linear array along the local x axis
    inline ArrayGeometry linear_tx_array(double spacing_m, int count = 3)
    {
        if (!(spacing_m > 0.0) || !std::isfinite(spacing_m))
            throw std::invalid_argument("linear_tx_array: spacing must be positive and finite.");
        if (count < 1)
            throw std::invalid_argument("linear_tx_array: count must be at least 1.");
        ArrayGeometry g{ArrayKind::linear_tx, {}, spacing_m};
        g.element_coords_m.reserve(std::size_t(count));
        for (int i = 0; i < count; ++i)
            g.element_coords_m.push_back({double(i) * spacing_m, 0.0});
        return g;
    }

    // One receiver placed in the world frame. The L-array's local X_A and Y_A axes map to
    // x_axis and y_axis; the array normal is x_axis cross y_axis.
    struct RxDevice
    {
        int rx_id = 0;
        Vec3 origin_m = Vec3::Zero();
        Vec3 x_axis = Vec3::UnitX();
        Vec3 y_axis = Vec3::UnitY();

        Vec3 normal() const { return x_axis.cross(y_axis); }
    };

    struct DeviceLayout
    {
        Vec3 tx_origin_m = Vec3::Zero();
        Vec3 tx_axis = Vec3::UnitX();
        ArrayGeometry tx_array;
        ArrayGeometry rx_array;
        std::vector<RxDevice> rx_devices;

        const RxDevice &rx(int rx_id) const
        {
            for (const auto &d : rx_devices)
                if (d.rx_id == rx_id)
                    return d;
            throw std::invalid_argument("DeviceLayout: unknown rx_id " + std::to_string(rx_id) + ".");
        }
    };

    // Desk-scale version of the four-receiver deployment: one transmitter with three linear
    // antennas in a room corner, four L-shaped receivers at floor level on the wall y = 0,
    // 2.5 m apart, arrays vertical and facing into the room.
    inline DeviceLayout default_layout(const ChannelConfig &config = {}, int num_receivers = 4)
    {
        if (num_receivers < 1)
            throw std::invalid_argument("default_layout: need at least one receiver.");
        const double half_wave = config.wavelength_m() / 2.0;
        DeviceLayout layout;
        layout.tx_origin_m = Vec3(0.0, 5.0, 1.0);
        layout.tx_axis = Vec3(1.0, -1.0, 0.0).normalized();
        layout.tx_array = linear_tx_array(half_wave, 3);
        layout.rx_array = l_shaped_array(half_wave);
        for (int i = 0; i < num_receivers; ++i)
            layout.rx_devices.push_back({i, Vec3(1.0 + 2.5 * double(i), 0.0, 0.0), Vec3(-1.0, 0.0, 0.0), Vec3(0.0, 0.0, 1.0)});
        return layout;
    }

    // Arithmetic grid start, start + step, ..., start + (count-1)*step
    struct GridAxis
    {
        double start = 0.0;
        double step = 1.0;
        int count = 1;

        double at(int i) const { return start + double(i) * step; }
        double last() const { return at(count - 1); }

        bool operator==(const GridAxis &) const = default;
    };

    // Search grid: angles in degrees, time of flight in seconds
    struct ParamGrid
    {
        GridAxis azimuth_deg{0.0, 1.0, 180};
        GridAxis elevation_deg{0.0, 1.0, 180};
        GridAxis aod_deg{0.0, 10.0, 19};
        GridAxis tof_s{0.0, 2e-9, 31};

        std::size_t size4d() const
        {
            return std::size_t(azimuth_deg.count) * std::size_t(elevation_deg.count) * std::size_t(aod_deg.count) *
                   std::size_t(tof_s.count);
        }
    };

    struct Violation
    {
        std::string field;
        std::string rule;
    };

    namespace detail
    {
        inline void check_axis(std::vector<Violation> &out, const std::string &name, const GridAxis &a, bool angular)
        {
            if (!(a.step > 0.0) || !std::isfinite(a.step))
                out.push_back({name + ".step", "step>0"});
            if (a.count < 1)
                out.push_back({name + ".count", "count>=1"});
            if (angular && a.count >= 1 && std::isfinite(a.step))
            {
                const double lo = std::min(a.start, a.last()), hi = std::max(a.start, a.last());
                if (lo < 0.0 || hi > 180.0)
                    out.push_back({name, "angles within [0,180]"});
            }
        }

        inline void check_geometry(std::vector<Violation> &out, const std::string &name, const ArrayGeometry &g)
        {
            const double d = g.spacing_m;
            if (!(d > 0.0) || !std::isfinite(d))
            {
                out.push_back({name + ".spacing_m", "spacing>0"});
                return;
            }
            const double tol = 1e-12 * d;
            if (g.kind == ArrayKind::l_shaped_rx)
            {
                const auto &c = g.element_coords_m;
                const bool ok = c.size() == 3 && std::abs(c[0].x) <= tol && std::abs(c[0].y) <= tol &&
                                std::abs(c[1].x - d) <= tol && std::abs(c[1].y) <= tol && std::abs(c[2].x) <= tol &&
                                std::abs(c[2].y - d) <= tol;
                if (!ok)
                    out.push_back({name + ".element_coords_m", "l_shaped elements at (0,0),(d,0),(0,d)"});
            }
            else
            {
                const auto &c = g.element_coords_m;
                if (c.empty())
                    out.push_back({name + ".element_coords_m", "linear array has at least one element"});
                for (std::size_t i = 0; i < c.size(); ++i)
                    if (std::abs(c[i].y) > tol || std::abs(c[i].x - double(i) * d) > tol * double(i + 1))
                    {
                        out.push_back({name + ".element_coords_m", "linear elements collinear with uniform spacing"});
                        break;
                    }
            }
        }

        inline bool is_unit(const Vec3 &v) { return std::abs(v.norm() - 1.0) <= 1e-9; }
    }

    // Checks every type invariant; an empty result means the configuration is usable
    inline std::vector<Violation> validate(const DeviceLayout &layout, const ChannelConfig &config, const ParamGrid &grid)
    {
        std::vector<Violation> out;

        if (!(config.carrier_freq_hz > 0.0) || !std::isfinite(config.carrier_freq_hz))
            out.push_back({"config.carrier_freq_hz", "carrier_freq_hz>0"});
        if (!(config.subcarrier_spacing_hz > 0.0) || !std::isfinite(config.subcarrier_spacing_hz))
            out.push_back({"config.subcarrier_spacing_hz", "subcarrier_spacing_hz>0"});
        if (config.num_subcarriers < 1)
            out.push_back({"config.num_subcarriers", "num_subcarriers>=1"});

        if (layout.tx_array.kind != ArrayKind::linear_tx)
            out.push_back({"layout.tx_array.kind", "transmit array is linear_tx"});
        if (layout.rx_array.kind != ArrayKind::l_shaped_rx)
            out.push_back({"layout.rx_array.kind", "receive array is l_shaped_rx"});
        detail::check_geometry(out, "layout.tx_array", layout.tx_array);
        detail::check_geometry(out, "layout.rx_array", layout.rx_array);
        if (!detail::is_unit(layout.tx_axis))
            out.push_back({"layout.tx_axis", "unit length"});
        if (!layout.tx_origin_m.allFinite())
            out.push_back({"layout.tx_origin_m", "finite"});

        if (layout.rx_devices.empty())
            out.push_back({"layout.rx_devices", "at least one receiver"});
        std::set<int> ids;
        for (const auto &d : layout.rx_devices)
        {
            const std::string name = "layout.rx_devices[" + std::to_string(d.rx_id) + "]";
            if (!ids.insert(d.rx_id).second)
                out.push_back({name + ".rx_id", "rx_ids unique"});
            if (!detail::is_unit(d.x_axis))
                out.push_back({name + ".x_axis", "unit length"});
            if (!detail::is_unit(d.y_axis))
                out.push_back({name + ".y_axis", "unit length"});
            if (std::abs(d.x_axis.dot(d.y_axis)) > 1e-9)
                out.push_back({name + ".y_axis", "orthogonality"});
            if (!d.origin_m.allFinite())
                out.push_back({name + ".origin_m", "finite"});
        }

        detail::check_axis(out, "grid.azimuth_deg", grid.azimuth_deg, true);
        detail::check_axis(out, "grid.elevation_deg", grid.elevation_deg, true);
        detail::check_axis(out, "grid.aod_deg", grid.aod_deg, true);
        detail::check_axis(out, "grid.tof_s", grid.tof_s, false);
        return out;
    }
}

#endif
