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

#include <catch_amalgamated.hpp>

#include "oracles.hpp"

#include <csiaoa/steering.hpp>

#include <random>

using namespace csiaoa;
using Catch::Matchers::WithinAbs;

namespace
{
    const ChannelConfig cfg;
    const double half_wave = cfg.wavelength_m() / 2.0;

    double phase_of(const cd &x) { return std::arg(x); }
}

TEST_CASE("Steering - 1D linear array")
{
    const auto two = linear_tx_array(half_wave, 2);
    const auto zero = steering_1d(0.0, two, cfg);
    CHECK(zero[0] == cd(1.0, 0.0));
    CHECK(zero[1] == cd(1.0, 0.0));

    const auto broad = steering_1d(90.0, two, cfg);
    CHECK(broad[0] == cd(1.0, 0.0));
    CHECK_THAT(broad[1].real(), WithinAbs(-1.0, 1e-12));
    CHECK_THAT(broad[1].imag(), WithinAbs(0.0, 1e-12));

    const auto three = steering_1d(30.0, linear_tx_array(half_wave, 3), cfg);
    CHECK_THAT(phase_of(three[1]), WithinAbs(-pi / 2.0, 1e-12));
    CHECK_THAT(std::abs(phase_of(three[2])), WithinAbs(pi, 1e-12)); // -pi and +pi coincide
}

TEST_CASE("Steering - 2D L-shaped array")
{
    const auto L = l_shaped_array(half_wave);
    const auto a0 = steering_2d(37.0, 0.0, L, cfg);
    for (int m = 0; m < 3; ++m)
        CHECK(a0[m] == cd(1.0, 0.0));

    const auto a = steering_2d(0.0, 90.0, L, cfg);
    CHECK(a[0] == cd(1.0, 0.0));
    CHECK_THAT(a[1].real(), WithinAbs(-1.0, 1e-12));
    CHECK_THAT(std::abs(a[2] - cd(1.0, 0.0)), WithinAbs(0.0, 1e-12));

    const auto b = steering_2d(90.0, 90.0, L, cfg);
    CHECK_THAT(std::abs(b[1] - cd(1.0, 0.0)), WithinAbs(0.0, 1e-12));
    CHECK_THAT(b[2].real(), WithinAbs(-1.0, 1e-12));
}

TEST_CASE("Steering - joint vector layout and sizes")
{
    ArrayGeometry one{ArrayKind::linear_tx, {{0.0, 0.0}}, half_wave};
    JointArray tiny{one, one, cfg, 1};
    const auto a1 = steering_joint(10.0, 20.0, 30.0, 5e-9, tiny);
    REQUIRE(a1.size() == 1);
    CHECK(a1[0] == cd(1.0, 0.0));

    const auto L = l_shaped_array(half_wave);
    const auto T = linear_tx_array(half_wave, 3);
    CHECK(steering_joint(1, 2, 3, 0, JointArray{L, T, cfg, 30}).size() == 270);
    const auto axis_pair = linear_tx_array(half_wave, 2);
    CHECK(steering_joint(1, 2, 3, 0, JointArray{axis_pair, T, cfg, 30}).size() == 180);
    CHECK(JointArray{L, T, cfg, 20}.dim() == 180);

    CHECK_THROWS_AS(joint_array(default_layout(cfg), cfg, 31), std::invalid_argument);
    CHECK_THROWS_AS(joint_array(default_layout(cfg), cfg, 0), std::invalid_argument);
}

TEST_CASE("Steering - joint vector matches the forward model entrywise")
{
    const auto L = l_shaped_array(half_wave);
    const auto T = linear_tx_array(half_wave, 3);
    const JointArray arr{L, T, cfg, 12};
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ang(0.0, 180.0), tof(0.0, 80e-9);
    for (int trial = 0; trial < 50; ++trial)
    {
        const double az = ang(rng), el = ang(rng), aod = ang(rng), tau = tof(rng);
        const auto a = steering_joint(az, el, aod, tau, arr);
        REQUIRE(a.size() == arr.dim());
        CHECK(a[0] == cd(1.0, 0.0));
        for (int s = 0; s < 3; ++s)
            for (int r = 0; r < 3; ++r)
                for (int v = 0; v < arr.vs; ++v)
                {
                    const cd ref = oracle::csi_entry(az, el, aod, tau, 1.0, L.element_coords_m[r].x, L.element_coords_m[r].y,
                                                     T.element_coords_m[s].x, cfg.carrier_freq_hz, cfg.subcarrier_spacing_hz, v);
                    const cd got = a[(s * 3 + r) * arr.vs + v];
                    CHECK_THAT(std::abs(got - ref), WithinAbs(0.0, 1e-10));
                    CHECK_THAT(std::abs(got), WithinAbs(1.0, 1e-14));
                }
    }
}

TEST_CASE("Steering - joint vector collapses for degenerate arrays")
{
    const auto L = l_shaped_array(half_wave);
    ArrayGeometry single_tx{ArrayKind::linear_tx, {{0.0, 0.0}}, half_wave};

    const JointArray no_tx{L, single_tx, cfg, 7};
    const auto a = steering_joint(33.0, 71.0, 120.0, 12e-9, no_tx);
    const auto phi = steering_2d(33.0, 71.0, L, cfg);
    const auto om = steering_tof(12e-9, cfg, 7);
    for (int r = 0; r < 3; ++r)
        for (int v = 0; v < 7; ++v)
            CHECK(a[r * 7 + v] == phi[r] * om[v]);

    const JointArray flat{L, single_tx, cfg, 1};
    const auto b = steering_joint(33.0, 71.0, 120.0, 12e-9, flat);
    for (int r = 0; r < 3; ++r)
        CHECK(b[r] == phi[r]);
}
