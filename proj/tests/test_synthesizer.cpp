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

#include <csiaoa/synthesizer.hpp>
#include <csiaoa/trace_io.hpp>

#include <cstring>
#include <random>

using namespace csiaoa;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    const ChannelConfig cfg;

    SkeletonFrame frame_at(const Vec3 &base)
    {
        SkeletonFrame f;
        for (int j = 0; j < num_joints; ++j)
            f.joints_m[std::size_t(j)] = base + Vec3(0.05 * j, 0.03 * (j % 3), 0.1 * j);
        return f;
    }

    bool same_bytes(const Trace &a, const Trace &b)
    {
        if (a.rx_ids != b.rx_ids || a.packet_count() != b.packet_count())
            return false;
        for (int rx : a.rx_ids)
            for (std::size_t k = 0; k < a.packet_count(); ++k)
            {
                const auto &x = a.packets.at(rx)[k].h;
                const auto &y = b.packets.at(rx)[k].h;
                if (x.size() != y.size() || std::memcmp(x.data(), y.data(), x.size() * sizeof(cd)) != 0)
                    return false;
            }
        return true;
    }
}

TEST_CASE("Synthesizer - joint on the receiver normal has zero elevation")
{
    const auto layout = default_layout(cfg);
    const auto &rx = layout.rx(2);
    SkeletonFrame f = frame_at(Vec3(4, 2, 1));
    f.joints_m[0] = rx.origin_m + 2.0 * rx.normal();
    const auto paths = skeleton_to_paths(f, layout, 2, cfg);
    CHECK(paths[0].elevation_deg == 0.0);
}

TEST_CASE("Synthesizer - collinear bistatic path length")
{
    DeviceLayout layout = default_layout(cfg, 1);
    layout.tx_origin_m = Vec3(0, 0, 0);
    layout.tx_axis = Vec3(0, 1, 0);
    layout.rx_devices[0] = {0, Vec3(3, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
    const PathParams p = reflection_path(Vec3(1.5, 0, 0), 1.0, layout, 0, cfg, 0.0);
    CHECK_THAT(p.tof_s, WithinRel(3.0 / 299792458.0, 1e-15));
    CHECK_THAT(p.tof_s, WithinAbs(1.0007e-8, 1e-12));
}

TEST_CASE("Synthesizer - path geometry matches an independent vector-algebra oracle")
{
    const auto layout = default_layout(cfg);
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial)
    {
        const auto track = random_walk_skeleton(1.0, 10.0, RoomBounds{}, rng());
        const SkeletonFrame &f = track.back();
        for (const auto &rx : layout.rx_devices)
        {
            const auto paths = skeleton_to_paths(f, layout, rx.rx_id, cfg, 3);
            REQUIRE(paths.size() == 14);
            for (int j = 0; j < num_joints; ++j)
            {
                const auto g = oracle::reflection(f.joints_m[std::size_t(j)], layout.tx_origin_m, layout.tx_axis, rx.origin_m,
                                                  rx.x_axis, rx.y_axis);
                const auto &p = paths[std::size_t(j)];
                CHECK_THAT(p.azimuth_deg, WithinRel(g.azimuth_deg, 1e-9));
                CHECK_THAT(p.elevation_deg, WithinRel(g.elevation_deg, 1e-9));
                CHECK_THAT(p.aod_deg, WithinRel(g.aod_deg, 1e-9));
                CHECK_THAT(p.tof_s, WithinRel(g.tof_s, 1e-9));
                CHECK(p.tof_s > 0.0);
                CHECK(p.azimuth_deg >= 0.0);
                CHECK(p.azimuth_deg <= 180.0);
                CHECK(p.elevation_deg >= 0.0);
                CHECK(p.elevation_deg <= 180.0);
                CHECK(std::abs(p.gain) > 0.0);
            }
        }
    }
}

TEST_CASE("Synthesizer - torso reflects more than limbs")
{
    const auto layout = default_layout(cfg);
    CHECK(default_reflectivity[std::size_t(Joint::Spine)] > default_reflectivity[std::size_t(Joint::LWrist)]);
    CHECK(default_reflectivity[std::size_t(Joint::LHip)] == 1.0);
    CHECK(default_reflectivity[std::size_t(Joint::Head)] == 0.6);
    CHECK(default_reflectivity[std::size_t(Joint::RAnkle)] == 0.3);
    CHECK(std::string(joint_names[13]) == "RAnkle");
}

TEST_CASE("Synthesizer - degenerate and out-of-view geometry is rejected")
{
    const auto layout = default_layout(cfg);
    SkeletonFrame f = frame_at(Vec3(4, 2, 1));
    f.joints_m[3] = layout.rx(0).origin_m;
    CHECK_THROWS_AS(skeleton_to_paths(f, layout, 0, cfg), geometry_error);
    f = frame_at(Vec3(4, 2, 1));
    f.joints_m[5] = Vec3(4, 2, -1); // below the receivers: azimuth outside [0, 180]
    CHECK_THROWS_AS(skeleton_to_paths(f, layout, 0, cfg), geometry_error);
    CHECK_THROWS_AS(skeleton_to_paths(frame_at(Vec3(4, 2, 1)), layout, 9, cfg), std::invalid_argument);
}

TEST_CASE("Synthesizer - single noiseless path equals the reshaped steering vector")
{
    const auto layout = default_layout(cfg);
    const PathParams p{52.0, 63.0, 21.0, 17e-9, 1.0};
    const CsiPacket pkt = synthesize_packet({p}, layout, cfg, 0, 0.0, {}, 1);
    REQUIRE(pkt.h.size() == 270);
    const JointArray arr = joint_array(layout, cfg, 30);
    const auto a = steering_joint(p.azimuth_deg, p.elevation_deg, p.aod_deg, p.tof_s, arr);
    for (int r = 0; r < 3; ++r)
        for (int s = 0; s < 3; ++s)
            for (int v = 0; v < 30; ++v)
                CHECK_THAT(std::abs(pkt(r, s, v) - a[arr.index(r, s, v)]), WithinAbs(0.0, 1e-14));
    CHECK(pkt.all_finite());
}

TEST_CASE("Synthesizer - superposition of paths")
{
    const auto layout = default_layout(cfg);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ang(0.0, 180.0), tof(0.0, 60e-9), amp(0.1, 2.0), ph(-pi, pi);
    for (int trial = 0; trial < 50; ++trial)
    {
        std::vector<PathParams> paths;
        for (int k = 0; k < 4; ++k)
            paths.push_back({ang(rng), ang(rng), ang(rng), tof(rng), std::polar(amp(rng), ph(rng))});
        const auto sum = synthesize_packet(paths, layout, cfg, 0, 0.0, {}, 0);
        std::vector<cd> manual(sum.h.size());
        double bound = 0.0;
        for (const auto &p : paths)
        {
            const auto one = synthesize_packet({p}, layout, cfg, 0, 0.0, {}, 0);
            for (std::size_t i = 0; i < manual.size(); ++i)
                manual[i] += one.h[i];
            bound += std::abs(p.gain);
        }
        double power = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < manual.size(); ++i)
        {
            CHECK_THAT(std::abs(sum.h[i] - manual[i]), WithinAbs(0.0, 1e-12 * bound));
            power += std::norm(sum.h[i]);
            scale = std::max(scale, std::abs(manual[i]));
        }
        CHECK(power <= bound * bound * 270.0 * (1.0 + 1e-12));
    }
}

TEST_CASE("Synthesizer - adjacent subcarrier phase step follows the delay")
{
    const auto layout = default_layout(cfg);
    for (double tau : {3e-9, 17e-9, 41e-9, 250e-9})
    {
        const auto pkt = synthesize_packet({PathParams{30, 40, 50, tau, 1.0}}, layout, cfg, 0, 0.0, {}, 0);
        const double expected = std::remainder(-2.0 * oracle::kPi * cfg.subcarrier_spacing_hz * tau, 2.0 * oracle::kPi);
        for (int v = 1; v < 30; ++v)
        {
            const double step = std::arg(pkt(1, 2, v) / pkt(1, 2, v - 1));
            CHECK_THAT(std::remainder(step - expected, 2.0 * oracle::kPi), WithinAbs(0.0, 1e-12));
        }
    }
}

TEST_CASE("Synthesizer - injected offsets are a pure phase ramp")
{
    const auto layout = default_layout(cfg);
    const PathParams p{30, 40, 50, 20e-9, 0.7};
    const auto clean = synthesize_packet({p}, layout, cfg, 0, 0.0, {}, 0);
    const auto dirty = synthesize_packet({p}, layout, cfg, 0, 0.0, {0.4, -0.2}, 0);
    for (int v = 0; v < 30; ++v)
        CHECK_THAT(std::abs(dirty(0, 0, v) - clean(0, 0, v) * std::polar(1.0, 0.4 - 0.2 * v)), WithinAbs(0.0, 1e-13));
}

TEST_CASE("Synthesizer - noise level follows the requested SNR")
{
    const auto layout = default_layout(cfg);
    const double sigma = noise_sigma_for_snr(1.0, 20.0);
    CHECK_THAT(sigma, WithinRel(std::sqrt(0.005), 1e-14));
    double acc = 0.0;
    int n = 0;
    for (int k = 0; k < 200; ++k)
    {
        const auto pkt = synthesize_packet({}, layout, cfg, 0, sigma, {}, std::uint64_t(k));
        for (const auto &x : pkt.h)
        {
            acc += std::norm(x);
            ++n;
        }
    }
    CHECK_THAT(acc / n, WithinRel(2.0 * sigma * sigma, 0.02));
    CHECK_THROWS_AS(synthesize_packet({}, layout, cfg, 0, -1.0, {}, 0), std::invalid_argument);
}

TEST_CASE("Synthesizer - trace sizes, labels and determinism")
{
    Scenario sc;
    sc.config = cfg;
    sc.layout = default_layout(cfg);
    sc.skeleton_track = random_walk_skeleton(1.0, 10.0, RoomBounds{}, 4);
    sc.static_paths_per_rx = default_static_paths(sc.layout, cfg);
    sc.snr_db = 25.0;
    sc.inject_sto = true;
    sc.rng_seed = 99;
    sc.duration_s = 1.0;

    const Trace t = synthesize_trace(sc);
    CHECK(t.rx_ids == std::vector<int>{0, 1, 2, 3});
    for (int rx : t.rx_ids)
        CHECK(t.packets.at(rx).size() == 1000);
    REQUIRE(t.labels.size() == 1000);
    CHECK_THAT(t.packets.at(2)[500].timestamp_s, WithinAbs(0.5, 1e-12));

    // labels are linear interpolations of the track at packet times
    const auto &a = sc.skeleton_track[2], &b = sc.skeleton_track[3];
    const auto &mid = t.labels[250];
    CHECK_THAT((mid.joints_m[0] - 0.5 * (a.joints_m[0] + b.joints_m[0])).norm(), WithinAbs(0.0, 1e-12));

    const Trace again = synthesize_trace(sc);
    CHECK(same_bytes(t, again));
    const Trace threaded = synthesize_trace(sc, 4);
    CHECK(same_bytes(t, threaded));
    CHECK(encode_trace(make_trace_file(1, t.packets.at(1), sc.layout, cfg, 1000.0)) ==
          encode_trace(make_trace_file(1, threaded.packets.at(1), sc.layout, cfg, 1000.0)));

    sc.rng_seed = 100;
    CHECK_FALSE(same_bytes(t, synthesize_trace(sc)));
}

TEST_CASE("Synthesizer - static-only scenes")
{
    Scenario sc;
    sc.layout = default_layout(cfg);
    sc.static_paths_per_rx = default_static_paths(sc.layout, cfg);
    sc.duration_s = 0.02;
    CHECK_THROWS_AS(synthesize_trace(sc), std::invalid_argument);

    sc.allow_static = true;
    const Trace t = synthesize_trace(sc);
    CHECK(t.labels.empty());
    for (int rx : t.rx_ids)
    {
        const auto &list = t.packets.at(rx);
        REQUIRE(list.size() == 20);
        for (const auto &p : list)
            CHECK(p.h == list.front().h);
    }

    Scenario bad = sc;
    bad.packet_rate_hz = 0.0;
    CHECK_THROWS_AS(synthesize_trace(bad), std::invalid_argument);
    bad = sc;
    bad.allow_static = false;
    bad.skeleton_track = {frame_at(Vec3(4, 2, 1)), frame_at(Vec3(4, 2, 1))};
    CHECK_THROWS_AS(synthesize_trace(bad), std::invalid_argument); // equal timestamps
}

TEST_CASE("Synthesizer - random walk skeleton")
{
    CHECK(random_walk_skeleton(10.0, 10.0, RoomBounds{}, 1).size() == 100);
    CHECK(random_walk_skeleton(1.0, 1.0, RoomBounds{}, 1).size() == 1);
    CHECK_THROWS_AS(random_walk_skeleton(0.0, 10.0, RoomBounds{}, 1), std::invalid_argument);

    const auto layout = default_layout(cfg);
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
        const auto track = random_walk_skeleton(10.0, 10.0, RoomBounds{}, seed);
        INFO("seed " << seed);
        CHECK(max_adjacent_displacement(track) <= 0.5);
        for (std::size_t i = 1; i < track.size(); ++i)
            CHECK(track[i].timestamp_s > track[i - 1].timestamp_s);
        for (const auto &f : track)
            for (const auto &j : f.joints_m)
            {
                CHECK(j.allFinite());
                CHECK(j.z() > 0.0);
            }
        // every frame is expressible by every receiver
        for (const auto &rx : layout.rx_devices)
            CHECK_NOTHROW(skeleton_to_paths(track[std::size_t(seed % 100)], layout, rx.rx_id, cfg));
    }
}
