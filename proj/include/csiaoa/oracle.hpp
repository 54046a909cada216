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

#ifndef CSIAOA_ORACLE_HPP
#define CSIAOA_ORACLE_HPP

#include "spectrum.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace csiaoa
{
    // Brute-force reference for music_spectrum_4d: every grid point builds its steering
    // vector from scratch and projects it onto each noise eigenvector. Slow on purpose.
    inline Spectrum4D oracle_spectrum(const NoiseSubspace &ns, const ParamGrid &grid, const JointArray &arr)
    {
        const long D = long(arr.num_rx()) * arr.num_tx() * arr.vs;
        if (ns.basis.cols() == 0)
            throw std::invalid_argument("oracle_spectrum: noise subspace is empty.");
        if (ns.basis.rows() != D)
            throw std::invalid_argument("oracle_spectrum: subspace dimension does not match the array.");

        const double rad = std::acos(-1.0) / 180.0;
        const double c = ChannelConfig::speed_of_light;
        const double f = arr.config.carrier_freq_hz;
        const double fd = arr.config.subcarrier_spacing_hz;

        Spectrum4D out;
        out.grid = grid;
        out.values.resize(grid.size4d());
        std::vector<std::complex<double>> a(static_cast<std::size_t>(D));
        std::size_t k = 0;
        for (int ia = 0; ia < grid.azimuth_deg.count; ++ia)
            for (int ie = 0; ie < grid.elevation_deg.count; ++ie)
                for (int io = 0; io < grid.aod_deg.count; ++io)
                    for (int it = 0; it < grid.tof_s.count; ++it, ++k)
                    {
                        const double phi = (grid.azimuth_deg.start + ia * grid.azimuth_deg.step) * rad;
                        const double theta = (grid.elevation_deg.start + ie * grid.elevation_deg.step) * rad;
                        const double omega = (grid.aod_deg.start + io * grid.aod_deg.step) * rad;
                        const double tau = grid.tof_s.start + it * grid.tof_s.step;

                        long n = 0;
                        for (int s = 0; s < arr.num_tx(); ++s)
                            for (int r = 0; r < arr.num_rx(); ++r)
                                for (int v = 0; v < arr.vs; ++v, ++n)
                                {
                                    const auto &pr = arr.rx.element_coords_m[std::size_t(r)];
                                    const auto &pt = arr.tx.element_coords_m[std::size_t(s)];
                                    const double ph_rx = 2.0 * M_PI * f * std::sin(theta) *
                                                         (pr.x * std::cos(phi) + pr.y * std::sin(phi)) / c;
                                    const double ph_tx = 2.0 * M_PI * f * pt.x * std::sin(omega) / c;
                                    const double ph_tof = 2.0 * M_PI * fd * tau * v;
                                    a[std::size_t(n)] = std::exp(std::complex<double>(0.0, -(ph_rx + ph_tx + ph_tof)));
                                }

                        double den = 0.0;
                        for (long col = 0; col < ns.basis.cols(); ++col)
                        {
                            std::complex<double> proj = 0.0;
                            for (long i = 0; i < D; ++i)
                                proj += std::conj(ns.basis(i, col)) * a[std::size_t(i)];
                            den += std::norm(proj);
                        }
                        out.values[k] = 1.0 / std::max(den, 1e-15 * double(D));
                    }
        return out;
    }
}

#endif
