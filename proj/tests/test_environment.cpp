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

#include <csiaoa/environment.hpp>

using namespace csiaoa;

namespace
{
    const ChannelConfig cfg;

    ParamGrid coarse_grid()
    {
        ParamGrid g;
        g.azimuth_deg = {0, 2, 90};
        g.elevation_deg = {0, 2, 90};
        g.aod_deg = {0, 20, 10};
        g.tof_s = {0, 4e-9, 16};
        return g;
    }

    std::map<int, std::vector<CsiPacket>> static_packets(const DeviceLayout &layout, const std::vector<PathParams> &paths, int n)
    {
        std::map<int, std::vector<CsiPacket>> out;
        for (int k = 0; k < n; ++k)
            out[0].push_back(synthesize_packet(paths, layout, cfg, 0, 0.0, {}, 0));
        return out;
    }
}

TEST_CASE("Environment - LoS-only profile peaks at the LoS cell")
{
    const auto layout = default_layout(cfg);
    const PathParams los = line_of_sight_path(layout, 0, cfg);
    EstimatorConfig est;
    est.calibrate = false;
    est.grid = coarse_grid();
    const auto prof = build_static_profile(static_packets(layout, {los}, 20), layout, cfg, est);
    REQUIRE(prof.count(0) == 1);
    const auto &p = prof.at(0);
    CHECK(p.source_packet_count == 20);
    const auto am = p.spectrum.argmax();
    CHECK(std::abs(est.grid.azimuth_deg.at(am[0]) - los.azimuth_deg) <= 1.0);
    CHECK(std::abs(est.grid.elevation_deg.at(am[1]) - los.elevation_deg) <= 1.0);
}

TEST_CASE("Environment - averaging and repeatability")
{
    AoaSpectrum a;
    a.grid.azimuth_deg.count = 3;
    a.grid.elevation_deg.count = 2;
    a.values = {0.1, 0.7, 1.3, 2.9, 1e-9, 17.0};
    const auto same = average_spectra({a, a, a});
    CHECK(same.values == a.values);
    CHECK(average_spectra({a, a}, ProfileAverage::median).values == a.values);

    AoaSpectrum b = a;
    for (auto &v : b.values)
        v *= 3.0;
    AoaSpectrum c = a;
    for (auto &v : c.values)
        v *= 100.0;
    const auto med = average_spectra({a, b, c}, ProfileAverage::median);
    CHECK(med.values == b.values);
    const auto mean = average_spectra({a, b});
    for (std::size_t i = 0; i < a.values.size(); ++i)
        CHECK(mean.values[i] == Catch::Approx(2.0 * a.values[i]));

    const auto layout = default_layout(cfg);
    EstimatorConfig est;
    est.calibrate = false;
    est.grid = coarse_grid();
    const auto statics = default_static_paths(layout, cfg).at(0);
    const auto p1 = build_static_profile(static_packets(layout, statics, 20), layout, cfg, est);
    const auto p2 = build_static_profile(static_packets(layout, statics, 20), layout, cfg, est);
    CHECK(p1.at(0).spectrum.values == p2.at(0).spectrum.values);
    // identical windows reproduce the single-window spectrum
    const auto one = estimate_spectrum(static_packets(layout, statics, 10).at(0), layout, cfg, est);
    CHECK(p1.at(0).spectrum.values == one.values);

    CHECK_THROWS_AS(build_static_profile({}, layout, cfg, est), std::invalid_argument);
    std::map<int, std::vector<CsiPacket>> hollow{{0, {}}};
    CHECK_THROWS_AS(build_static_profile(hollow, layout, cfg, est), std::invalid_argument);
}

TEST_CASE("Environment - subtraction examples")
{
    AoaSpectrum live;
    live.grid.azimuth_deg.count = 4;
    live.grid.elevation_deg.count = 4;
    live.values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16};
    StaticProfile self{live, 10, 0.0};
    for (double v : subtract_static(live, self).values)
        CHECK(v == 0.0);

    StaticProfile zero{live, 10, 0.0};
    std::fill(zero.spectrum.values.begin(), zero.spectrum.values.end(), 0.0);
    CHECK(subtract_static(live, zero).values == live.values);

    StaticProfile big = zero;
    std::fill(big.spectrum.values.begin(), big.spectrum.values.end(), 8.5);
    for (double v : subtract_static(live, big).values)
        CHECK(v >= 0.0);

    StaticProfile other = zero;
    other.spectrum.grid.elevation_deg.step = 2.0;
    CHECK_THROWS_AS(subtract_static(live, other), std::invalid_argument);
    StaticProfile wrong_rx = zero;
    wrong_rx.spectrum.rx_id = 3;
    CHECK_THROWS_AS(subtract_static(live, wrong_rx), std::invalid_argument);
}

TEST_CASE("Environment - residual peak moves to the body")
{
    const auto layout = default_layout(cfg);
    EstimatorConfig est;
    est.calibrate = false;
    est.grid = coarse_grid();
    const auto statics = default_static_paths(layout, cfg).at(0);
    const auto prof = build_static_profile(static_packets(layout, statics, 10), layout, cfg, est);

    const PathParams body = reflection_path(Vec3(4.0, 2.5, 1.2), 1.0, layout, 0, cfg, 0.3, 4.0);
    auto paths = statics;
    paths.push_back(body);
    std::vector<CsiPacket> live;
    for (int k = 0; k < 10; ++k)
        live.push_back(synthesize_packet(paths, layout, cfg, 0, 0.0, {}, 0));
    const auto spec = estimate_spectrum(live, layout, cfg, est);
    const auto resid = subtract_static(spec, prof.at(0));
    const auto am = resid.argmax();
    CHECK(std::abs(est.grid.azimuth_deg.at(am[0]) - body.azimuth_deg) <= 2.0);
    CHECK(std::abs(est.grid.elevation_deg.at(am[1]) - body.elevation_deg) <= 2.0);
    const auto los = statics[0];
    CHECK(std::abs(est.grid.azimuth_deg.at(am[0]) - los.azimuth_deg) > 5.0);
}
