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

#include <csiaoa/calibration.hpp>

#include <functional>
#include <random>

using namespace csiaoa;
using Catch::Matchers::WithinAbs;

namespace
{
    const ChannelConfig cfg;

    CsiPacket packet_from_phases(int R, int S, int V, const std::function<double(int, int, int)> &phase)
    {
        CsiPacket p(0, 0.0, R, S, V);
        for (int r = 0; r < R; ++r)
            for (int s = 0; s < S; ++s)
                for (int v = 0; v < V; ++v)
                    p(r, s, v) = std::polar(1.0 + 0.1 * r, phase(r, s, v));
        return p;
    }
}

TEST_CASE("Calibration - unwrap examples")
{
    CsiPacket ones(0, 0.0, 3, 3, 30);
    std::fill(ones.h.begin(), ones.h.end(), cd(1.0, 0.0));
    const auto z = unwrap_phase(ones);
    for (double x : z.psi)
        CHECK(x == 0.0);

    CsiPacket seq(0, 0.0, 1, 1, 3);
    seq(0, 0, 0) = std::polar(1.0, 0.1);
    seq(0, 0, 1) = std::polar(1.0, 0.2 + 2.0 * pi);
    seq(0, 0, 2) = std::polar(1.0, 0.3);
    const auto u = unwrap_phase(seq);
    CHECK_THAT(u(0, 0, 0), WithinAbs(0.1, 1e-12));
    CHECK_THAT(u(0, 0, 1), WithinAbs(0.2, 1e-12));
    CHECK_THAT(u(0, 0, 2), WithinAbs(0.3, 1e-12));
}

TEST_CASE("Calibration - unwrap recovers smooth ramps")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> slope(-2.5, 2.5), off(-10.0, 10.0), curv(-0.01, 0.01);
    for (int trial = 0; trial < 200; ++trial)
    {
        const double m = slope(rng), b = off(rng), c = curv(rng);
        const auto pkt = packet_from_phases(2, 2, 30, [&](int r, int s, int v)
                                            { return b + r - s + m * v + c * v * v; });
        const auto u = unwrap_phase(pkt);
        for (int r = 0; r < 2; ++r)
            for (int s = 0; s < 2; ++s)
            {
                std::vector<double> wrapped;
                for (int v = 0; v < 30; ++v)
                    wrapped.push_back(std::arg(pkt(r, s, v)));
                const auto ref = oracle::unwrap(wrapped);
                for (int v = 0; v < 30; ++v)
                {
                    CHECK_THAT(u(r, s, v), WithinAbs(ref[std::size_t(v)], 1e-9));
                    if (v > 0)
                        CHECK(std::abs(u(r, s, v) - u(r, s, v - 1)) <= pi);
                    // recovered ramp differs from the truth by a constant multiple of 2 pi
                    const double k = (u(r, s, v) - (b + r - s + m * v + c * v * v)) / (2.0 * pi);
                    CHECK_THAT(k, WithinAbs(std::round(k), 1e-9));
                }
            }
    }
}

TEST_CASE("Calibration - zero entry has undefined phase")
{
    CsiPacket p(0, 0.0, 3, 3, 30);
    std::fill(p.h.begin(), p.h.end(), cd(1.0, 0.0));
    p(1, 2, 17) = 0.0;
    try
    {
        unwrap_phase(p);
        FAIL("expected undefined_phase_error");
    }
    catch (const undefined_phase_error &e)
    {
        CHECK(e.r() == 1);
        CHECK(e.s() == 2);
        CHECK(e.v() == 17);
    }
    CHECK_THROWS_AS(calibrate_packet(p), undefined_phase_error);
}

TEST_CASE("Calibration - linear fit examples")
{
    const auto exact = packet_from_phases(3, 3, 30, [](int, int, int v)
                                          { return 0.3 + 0.05 * v; });
    const auto fit = fit_linear_phase(unwrap_phase(exact));
    CHECK_THAT(fit.slope_rad_per_subcarrier, WithinAbs(-0.05, 1e-12));
    CHECK_THAT(fit.offset_rad, WithinAbs(-0.3, 1e-12));
    CHECK_THAT(fit.residual_rms_rad, WithinAbs(0.0, 1e-12));

    const auto flat = packet_from_phases(3, 3, 30, [](int r, int s, int)
                                         { return 0.2 * r + 0.1 * s; });
    CHECK_THAT(fit_linear_phase(unwrap_phase(flat)).slope_rad_per_subcarrier, WithinAbs(0.0, 1e-13));

    CsiPacket one(0, 0.0, 3, 3, 1);
    std::fill(one.h.begin(), one.h.end(), cd(1.0, 0.0));
    CHECK_THROWS_AS(fit_linear_phase(unwrap_phase(one)), std::invalid_argument);
}

TEST_CASE("Calibration - per-chain offsets leave the slope unchanged")
{
    const auto pkt = packet_from_phases(3, 3, 30, [](int r, int s, int v)
                                        { return 0.4 * r - 0.7 * s + 0.08 * v; });
    const auto shared = fit_linear_phase(unwrap_phase(pkt));
    const auto chain = fit_linear_phase(unwrap_phase(pkt), {true});
    CHECK_THAT(chain.slope_rad_per_subcarrier, WithinAbs(shared.slope_rad_per_subcarrier, 1e-14));
    CHECK_THAT(chain.residual_rms_rad, WithinAbs(0.0, 1e-12));
    CHECK(shared.residual_rms_rad > 0.1);
    REQUIRE(chain.chain_offsets_rad.size() == 9);
    CHECK_THAT(chain.chain_offsets_rad[1], WithinAbs(0.7, 1e-12)); // r = 0, s = 1
}

TEST_CASE("Calibration - slope error under phase jitter")
{
    // Least-squares slope std is sigma / sqrt(R S sum (v - vbar)^2)
    const int R = 3, S = 3, V = 30;
    const double sigma = 0.01;
    double sxx = 0.0;
    for (int v = 0; v < V; ++v)
        sxx += (v - 14.5) * (v - 14.5);
    const double sd = sigma / std::sqrt(R * S * sxx);
    int outliers = 0;
    double sum_sq = 0.0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed)
    {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> jitter(0.0, sigma);
        std::uniform_real_distribution<double> sl(-1.0, 1.0);
        const double m = sl(rng);
        const auto pkt = packet_from_phases(R, S, V, [&](int, int, int v)
                                            { return 1.0 + m * v + jitter(rng); });
        const double err = fit_linear_phase(unwrap_phase(pkt)).slope_rad_per_subcarrier + m;
        sum_sq += err * err;
        if (std::abs(err) > 3.0 * sd)
            ++outliers;
        CHECK(std::abs(err) < 3.0 * sigma / std::sqrt(double(V * R * S)));
    }
    CHECK(outliers <= 10); // 3-sigma tail is 0.27 %
    CHECK_THAT(std::sqrt(sum_sq / 1000.0) / sd, WithinAbs(1.0, 0.1));
}

TEST_CASE("Calibration - injected delay is removed")
{
    const auto layout = default_layout(cfg);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial)
    {
        const PathParams p{20 + 140 * u(rng), 10 + 80 * u(rng), 180 * u(rng), 60e-9 * u(rng), std::polar(0.5, 6.0 * u(rng))};
        const PhaseOffsets off{-pi + 2 * pi * u(rng), -2.0 * pi * cfg.subcarrier_spacing_hz * 50e-9 * u(rng)};
        const auto pkt = synthesize_packet({p}, layout, cfg, 0, 0.0, off, 0);
        const auto cal = calibrate_packet(pkt);
        CHECK(std::abs(fit_linear_phase(unwrap_phase(cal)).slope_rad_per_subcarrier) < 1e-6);
        for (std::size_t i = 0; i < pkt.h.size(); ++i)
            CHECK_THAT(std::abs(cal.h[i]), WithinAbs(std::abs(pkt.h[i]), 1e-14));
        const auto twice = calibrate_packet(cal);
        for (std::size_t i = 0; i < pkt.h.size(); ++i)
            CHECK_THAT(std::abs(twice.h[i] - cal.h[i]), WithinAbs(0.0, 1e-9));
    }
}

TEST_CASE("Calibration - packet without a slope is unchanged")
{
    const auto layout = default_layout(cfg);
    const auto pkt = synthesize_packet({PathParams{70, 35, 25, 0.0, cd(0.3, 0.4)}}, layout, cfg, 0, 0.0, {}, 0);
    const auto cal = calibrate_packet(pkt);
    for (std::size_t i = 0; i < pkt.h.size(); ++i)
        CHECK_THAT(std::abs(cal.h[i] - pkt.h[i]), WithinAbs(0.0, 1e-12));
}
