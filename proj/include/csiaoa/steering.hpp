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

#ifndef CSIAOA_STEERING_HPP
#define CSIAOA_STEERING_HPP

#include "model.hpp"

#include <Eigen/Core>

#include <complex>
#include <stdexcept>

namespace csiaoa
{
    using cd = std::complex<double>;

    // e^{-j x}
    inline cd unit_phasor(double phase) { return std::polar(1.0, -phase); }

    // Phase progression across a linear array: element m = e^{-j 2 pi f X_m sin(theta) / c}.
    // theta is measured from broadside.
    inline Eigen::VectorXcd steering_1d(double theta_deg, const ArrayGeometry &geometry, const ChannelConfig &config)
    {
        const double k = config.wavenumber() * sin_deg(theta_deg);
        Eigen::VectorXcd a(Eigen::Index(geometry.size()));
        for (Eigen::Index m = 0; m < a.size(); ++m)
            a[m] = unit_phasor(k * geometry.element_coords_m[std::size_t(m)].x);
        return a;
    }

    // Receive-array phases for azimuth phi and elevation theta (theta = 0 is the array normal):
    // element m = e^{-j 2 pi f sin(theta) (X_m cos(phi) + Y_m sin(phi)) / c}
    inline Eigen::VectorXcd steering_2d(double phi_deg, double theta_deg, const ArrayGeometry &geometry,
                                        const ChannelConfig &config)
    {
        const double k = config.wavenumber() * sin_deg(theta_deg);
        const double cp = cos_deg(phi_deg), sp = sin_deg(phi_deg);
        Eigen::VectorXcd a(Eigen::Index(geometry.size()));
        for (Eigen::Index m = 0; m < a.size(); ++m)
        {
            const auto &p = geometry.element_coords_m[std::size_t(m)];
            a[m] = unit_phasor(k * (p.x * cp + p.y * sp));
        }
        return a;
    }

    // Transmit-array phases for angle of departure omega
    inline Eigen::VectorXcd steering_tx(double omega_deg, const ArrayGeometry &geometry, const ChannelConfig &config)
    {
        return steering_1d(omega_deg, geometry, config);
    }

    // Subcarrier phases e^{-j 2 pi f_delta tau v} for v = 0 .. count-1
    inline Eigen::VectorXcd steering_tof(double tof_s, const ChannelConfig &config, int count)
    {
        const double step = 2.0 * pi * config.subcarrier_spacing_hz * tof_s;
        Eigen::VectorXcd w(count);
        for (int v = 0; v < count; ++v)
            w[v] = unit_phasor(step * double(v));
        return w;
    }

    // Joint receive / transmit / subcarrier sensor array used by the 4D estimator
    struct JointArray
    {
        ArrayGeometry rx;
        ArrayGeometry tx;
        ChannelConfig config;
        int vs = 20; // subcarrier smoothing window

        int num_rx() const { return int(rx.size()); }
        int num_tx() const { return int(tx.size()); }
        int dim() const { return num_rx() * num_tx() * vs; }

        // Flat sensor index: transmit antenna outermost, then receive antenna, then subcarrier
        int index(int r, int s, int v) const { return (s * num_rx() + r) * vs + v; }
    };

    inline JointArray joint_array(const DeviceLayout &layout, const ChannelConfig &config, int vs)
    {
        if (vs < 1 || vs > config.num_subcarriers)
            throw std::invalid_argument("joint_array: smoothing window must be in [1, num_subcarriers].");
        return JointArray{layout.rx_array, layout.tx_array, config, vs};
    }

    // a = gamma(omega) (x) [Phi(phi, theta) (x) Omega(tau)], length R*S*V_s
    inline Eigen::VectorXcd steering_joint(double phi_deg, double theta_deg, double omega_deg, double tof_s,
                                           const JointArray &arr)
    {
        const Eigen::VectorXcd phi = steering_2d(phi_deg, theta_deg, arr.rx, arr.config);
        const Eigen::VectorXcd gam = steering_tx(omega_deg, arr.tx, arr.config);
        const Eigen::VectorXcd om = steering_tof(tof_s, arr.config, arr.vs);

        Eigen::VectorXcd a(arr.dim());
        for (int s = 0; s < arr.num_tx(); ++s)
            for (int r = 0; r < arr.num_rx(); ++r)
            {
                const cd gr = gam[s] * phi[r];
                for (int v = 0; v < arr.vs; ++v)
                    a[arr.index(r, s, v)] = gr * om[v];
            }
        return a;
    }
}

#endif
