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

// Independent reference computations used by the unit tests. These are written
// against the physical definitions directly and share no code with the library
// beyond its plain data types.

#ifndef CSIAOA_TEST_ORACLES_HPP
#define CSIAOA_TEST_ORACLES_HPP

#include <csiaoa/model.hpp>

#include <cmath>
#include <complex>
#include <vector>

namespace oracle
{
    constexpr double c0 = 299792458.0;
    const double kPi = std::acos(-1.0);

    struct Geometry
    {
        double azimuth_deg, elevation_deg, aod_deg, tof_s;
    };

    // Angles of a reflector by plain vector algebra: rotate the two legs into the receiver
    // basis by explicit dot products, then convert with spherical formulas.
    inline Geometry reflection(const csiaoa::Vec3 &p, const csiaoa::Vec3 &tx, const csiaoa::Vec3 &tx_axis,
                               const csiaoa::Vec3 &rx, const csiaoa::Vec3 &xa, const csiaoa::Vec3 &ya)
    {
        const double dx = p[0] - rx[0], dy = p[1] - rx[1], dz = p[2] - rx[2];
        const double dr = std::sqrt(dx * dx + dy * dy + dz * dz);
        const double nx = xa[1] * ya[2] - xa[2] * ya[1];
        const double ny = xa[2] * ya[0] - xa[0] * ya[2];
        const double nz = xa[0] * ya[1] - xa[1] * ya[0];
        const double lx = (dx * xa[0] + dy * xa[1] + dz * xa[2]) / dr;
        const double ly = (dx * ya[0] + dy * ya[1] + dz * ya[2]) / dr;
        const double lz = (dx * nx + dy * ny + dz * nz) / dr;

        const double ex = p[0] - tx[0], ey = p[1] - tx[1], ez = p[2] - tx[2];
        const double dt = std::sqrt(ex * ex + ey * ey + ez * ez);
        const double along = (ex * tx_axis[0] + ey * tx_axis[1] + ez * tx_axis[2]) / dt;

        Geometry g;
        g.elevation_deg = std::acos(lz) * 180.0 / kPi;
        g.azimuth_deg = std::atan2(ly, lx) * 180.0 / kPi;
        g.aod_deg = std::asin(along) * 180.0 / kPi;
        g.tof_s = (dr + dt) / c0;
        return g;
    }

    // Phase unwrapping by accumulated 2*pi corrections
    inline std::vector<double> unwrap(const std::vector<double> &wrapped)
    {
        std::vector<double> out(wrapped.size());
        double correction = 0.0;
        for (std::size_t i = 0; i < wrapped.size(); ++i)
        {
            if (i > 0)
            {
                const double d = wrapped[i] - wrapped[i - 1];
                if (d > kPi)
                    correction -= 2.0 * kPi;
                else if (d < -kPi)
                    correction += 2.0 * kPi;
            }
            out[i] = wrapped[i] + correction;
        }
        return out;
    }

    // Single-path CSI entry straight from the forward model
    inline std::complex<double> csi_entry(double az, double el, double aod, double tof, std::complex<double> gain,
                                          double xr, double yr, double xt, double f, double fd, int v)
    {
        const double rad = kPi / 180.0;
        const double phase = 2.0 * kPi * f * std::sin(el * rad) * (xr * std::cos(az * rad) + yr * std::sin(az * rad)) / c0 +
                             2.0 * kPi * f * xt * std::sin(aod * rad) / c0 + 2.0 * kPi * fd * tof * v;
        return gain * std::polar(1.0, -phase);
    }
}

#endif
