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

#ifndef CSIAOA_SYNTHESIZER_HPP
#define CSIAOA_SYNTHESIZER_HPP

#include "errors.hpp"
#include "model.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "steering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace csiaoa
{
    // One propagation path as seen by one receiver
    struct PathParams
    {
        double azimuth_deg = 0.0;
        double elevation_deg = 0.0;
        double aod_deg = 0.0;
        double tof_s = 0.0;
        cd gain = 1.0;
    };

    // Channel matrix of one packet, entries indexed (r, s, v) with r outermost
    struct CsiPacket
    {
        int rx_id = 0;
        double timestamp_s = 0.0;
        int num_rx = 0;
        int num_tx = 0;
        int num_sc = 0;
        std::vector<cd> h;

        CsiPacket() = default;
        CsiPacket(int rx, double t, int R, int S, int V)
            : rx_id(rx), timestamp_s(t), num_rx(R), num_tx(S), num_sc(V), h(std::size_t(R) * std::size_t(S) * std::size_t(V))
        {
            if (R < 1 || S < 1 || V < 1)
                throw std::invalid_argument("CsiPacket: dimensions must be positive.");
        }

        std::size_t offset(int r, int s, int v) const { return (std::size_t(r) * std::size_t(num_tx) + std::size_t(s)) * std::size_t(num_sc) + std::size_t(v); }
        cd &operator()(int r, int s, int v) { return h[offset(r, s, v)]; }
        const cd &operator()(int r, int s, int v) const { return h[offset(r, s, v)]; }

        bool all_finite() const
        {
            return std::all_of(h.begin(), h.end(), [](const cd &x)
                               { return std::isfinite(x.real()) && std::isfinite(x.imag()); });
        }
    };

    enum class Joint
    {
        Head,
        Spine,
        LShoulder,
        LElbow,
        LWrist,
        RShoulder,
        RElbow,
        RWrist,
        LHip,
        LKnee,
        LAnkle,
        RHip,
        RKnee,
        RAnkle
    };

    inline constexpr int num_joints = 14;

    inline constexpr std::array<const char *, num_joints> joint_names = {
        "Head", "Spine", "LShoulder", "LElbow", "LWrist", "RShoulder", "RElbow",
        "RWrist", "LHip", "LKnee", "LAnkle", "RHip", "RKnee", "RAnkle"};

    // Torso reflects strongest, distal limbs weakest
    inline constexpr std::array<double, num_joints> default_reflectivity = {
        0.6, 1.0, 0.6, 0.3, 0.3, 0.6, 0.3, 0.3, 1.0, 0.6, 0.3, 1.0, 0.6, 0.3};

    struct SkeletonFrame
    {
        double timestamp_s = 0.0;
        std::array<Vec3, num_joints> joints_m{};

        const Vec3 &operator[](Joint j) const { return joints_m[std::size_t(j)]; }
    };

    struct Scenario
    {
        DeviceLayout layout;
        ChannelConfig config;
        std::vector<SkeletonFrame> skeleton_track;
        std::map<int, std::vector<PathParams>> static_paths_per_rx;
        std::optional<double> snr_db;     // empty: noiseless
        double packet_rate_hz = 1000.0;
        bool inject_sto = false;
        std::uint64_t rng_seed = 0;

        double p_visible = 0.5;           // per-packet, per-joint inclusion probability
        double reflection_scale_m = 0.5;  // scales body reflection amplitudes
        double max_sto_delay_s = 50e-9;   // injected sampling delay is uniform in [0, max]
        double duration_s = 0.0;          // 0: derived from the skeleton track
        bool allow_static = false;        // permit an empty skeleton track
        std::array<double, num_joints> reflectivity = default_reflectivity;
    };

    struct PhaseOffsets
    {
        double common_offset_rad = 0.0;
        double sto_slope_rad_per_subcarrier = 0.0;
    };

    // Angles of direction `dir` (unit, from the receiver outward) in the receiver frame.
    // Returns {azimuth, elevation} in degrees; azimuth needs a non-negative y component.
    inline std::array<double, 2> arrival_angles(const RxDevice &rx, const Vec3 &dir)
    {
        const double ux = dir.dot(rx.x_axis), uy = dir.dot(rx.y_axis);
        const double uz = dir.dot(rx.normal());
        const double elevation = deg_from_rad(std::acos(std::clamp(uz, -1.0, 1.0)));
        double azimuth;
        if (std::hypot(ux, uy) <= 1e-12)
            azimuth = 0.0; // along the normal, azimuth is arbitrary
        else if (uy >= -1e-12)
            azimuth = deg_from_rad(std::atan2(std::max(uy, 0.0), ux));
        else
            throw geometry_error("direction lies in the receiver's negative y half-plane (azimuth outside [0,180]) for rx " +
                                 std::to_string(rx.rx_id) + ".");
        return {azimuth, elevation};
    }

    // Angle of departure from broadside of the transmit array for unit direction `dir`
    inline double departure_angle(const DeviceLayout &layout, const Vec3 &dir)
    {
        const double proj = dir.dot(layout.tx_axis);
        if (proj < -1e-12)
            throw geometry_error("direction leaves the transmit array on its negative-axis side (AoD outside [0,180]).");
        return deg_from_rad(std::asin(std::clamp(proj, 0.0, 1.0)));
    }

    // Single-bounce path tx -> point -> rx with amplitude reflectivity * scale / (d_tx * d_rx)
    // and phase phase_rad - 2 pi f tau.
    inline PathParams reflection_path(const Vec3 &point, double reflectivity, const DeviceLayout &layout, int rx_id,
                                      const ChannelConfig &config, double phase_rad, double scale_m = 0.5)
    {
        const RxDevice &rx = layout.rx(rx_id);
        const Vec3 to_rx = point - rx.origin_m;
        const Vec3 to_tx = point - layout.tx_origin_m;
        const double d_rx = to_rx.norm(), d_tx = to_tx.norm();
        if (!(d_rx > 1e-9) || !(d_tx > 1e-9))
            throw geometry_error("degenerate geometry: reflector coincides with an array origin.");

        PathParams p;
        const auto angles = arrival_angles(rx, to_rx / d_rx);
        p.azimuth_deg = angles[0];
        p.elevation_deg = angles[1];
        p.aod_deg = departure_angle(layout, to_tx / d_tx);
        p.tof_s = (d_tx + d_rx) / ChannelConfig::speed_of_light;
        const double amplitude = reflectivity * scale_m / (d_tx * d_rx);
        p.gain = std::polar(amplitude, phase_rad - 2.0 * pi * config.carrier_freq_hz * p.tof_s);
        return p;
    }

    // Direct tx -> rx path with free-space amplitude 1/d
    inline PathParams line_of_sight_path(const DeviceLayout &layout, int rx_id, const ChannelConfig &config)
    {
        const RxDevice &rx = layout.rx(rx_id);
        const Vec3 d = layout.tx_origin_m - rx.origin_m;
        const double len = d.norm();
        if (!(len > 1e-9))
            throw geometry_error("degenerate geometry: transmitter and receiver coincide.");
        PathParams p;
        const auto angles = arrival_angles(rx, d / len);
        p.azimuth_deg = angles[0];
        p.elevation_deg = angles[1];
        p.aod_deg = departure_angle(layout, -d / len);
        p.tof_s = len / ChannelConfig::speed_of_light;
        p.gain = std::polar(1.0 / len, -2.0 * pi * config.carrier_freq_hz * p.tof_s);
        return p;
    }

    // Mirror-image reflection off the horizontal plane z = height (ceiling)
    inline PathParams ceiling_path(const DeviceLayout &layout, int rx_id, const ChannelConfig &config, double height_m,
                                   double reflectivity)
    {
        const RxDevice &rx = layout.rx(rx_id);
        Vec3 image = layout.tx_origin_m;
        image.z() = 2.0 * height_m - image.z();
        const Vec3 d = image - rx.origin_m;
        const double len = d.norm();
        if (!(len > 1e-9))
            throw geometry_error("degenerate geometry: image source coincides with the receiver.");
        // departure direction is the arrival direction mirrored back through the plane
        Vec3 dep = -d / len;
        dep.z() = -dep.z();
        PathParams p;
        const auto angles = arrival_angles(rx, d / len);
        p.azimuth_deg = angles[0];
        p.elevation_deg = angles[1];
        p.aod_deg = departure_angle(layout, dep);
        p.tof_s = len / ChannelConfig::speed_of_light;
        p.gain = std::polar(reflectivity / len, -2.0 * pi * config.carrier_freq_hz * p.tof_s);
        return p;
    }

    // LoS plus one ceiling bounce for every receiver
    inline std::map<int, std::vector<PathParams>> default_static_paths(const DeviceLayout &layout, const ChannelConfig &config,
                                                                        double ceiling_height_m = 3.0, double ceiling_reflectivity = 0.4)
    {
        std::map<int, std::vector<PathParams>> out;
        for (const auto &rx : layout.rx_devices)
            out[rx.rx_id] = {line_of_sight_path(layout, rx.rx_id, config),
                             ceiling_path(layout, rx.rx_id, config, ceiling_height_m, ceiling_reflectivity)};
        return out;
    }

    inline double joint_phase(std::uint64_t seed, int rx_id, int joint)
    {
        std::mt19937_64 rng(derive_seed(seed, {0x10ULL, std::uint64_t(rx_id), std::uint64_t(joint)}));
        return std::uniform_real_distribution<double>(-pi, pi)(rng);
    }

    // One path per joint; every joint is an independent point scatterer
    inline std::vector<PathParams> skeleton_to_paths(const SkeletonFrame &frame, const DeviceLayout &layout, int rx_id,
                                                     const ChannelConfig &config, std::uint64_t phase_seed = 0,
                                                     const std::array<double, num_joints> &reflectivity = default_reflectivity,
                                                     double scale_m = 0.5)
    {
        std::vector<PathParams> paths;
        paths.reserve(num_joints);
        for (int j = 0; j < num_joints; ++j)
        {
            if (!frame.joints_m[std::size_t(j)].allFinite())
                throw std::invalid_argument("skeleton_to_paths: non-finite joint coordinate.");
            paths.push_back(reflection_path(frame.joints_m[std::size_t(j)], reflectivity[std::size_t(j)], layout, rx_id,
                                            config, joint_phase(phase_seed, rx_id, j), scale_m));
        }
        return paths;
    }

    // Per-component noise std for a given SNR against a reference path amplitude
    inline double noise_sigma_for_snr(double reference_amplitude, double snr_db)
    {
        return reference_amplitude / std::sqrt(2.0 * std::pow(10.0, snr_db / 10.0));
    }

    // h(r,s,v) = sum_k g_k Phi_r(phi_k, theta_k) Gamma_s(omega_k) Omega(tau_k)^v + noise,
    // then multiplied by e^{j(common + slope v)}.
    inline CsiPacket synthesize_packet(const std::vector<PathParams> &paths, const DeviceLayout &layout,
                                       const ChannelConfig &config, int rx_id, double noise_sigma,
                                       const PhaseOffsets &offsets, std::uint64_t seed)
    {
        const int R = int(layout.rx_array.size()), S = int(layout.tx_array.size()), V = config.num_subcarriers;
        if (R < 1 || S < 1 || V < 1)
            throw std::invalid_argument("synthesize_packet: empty array or no subcarriers.");
        if (!(noise_sigma >= 0.0))
            throw std::invalid_argument("synthesize_packet: noise_sigma must be non-negative.");

        CsiPacket pkt(rx_id, 0.0, R, S, V);
        for (const auto &p : paths)
        {
            const Eigen::VectorXcd phi = steering_2d(p.azimuth_deg, p.elevation_deg, layout.rx_array, config);
            const Eigen::VectorXcd gam = steering_tx(p.aod_deg, layout.tx_array, config);
            const Eigen::VectorXcd om = steering_tof(p.tof_s, config, V);
            for (int r = 0; r < R; ++r)
                for (int s = 0; s < S; ++s)
                {
                    const cd c = p.gain * phi[r] * gam[s];
                    for (int v = 0; v < V; ++v)
                        pkt(r, s, v) += c * om[v];
                }
        }

        if (noise_sigma > 0.0)
        {
            std::mt19937_64 rng(seed);
            std::normal_distribution<double> normal(0.0, noise_sigma);
            for (auto &x : pkt.h)
            {
                const double re = normal(rng);
                const double im = normal(rng);
                x += cd(re, im);
            }
        }

        if (offsets.common_offset_rad != 0.0 || offsets.sto_slope_rad_per_subcarrier != 0.0)
            for (int v = 0; v < V; ++v)
            {
                const cd rot = std::polar(1.0, offsets.common_offset_rad + offsets.sto_slope_rad_per_subcarrier * double(v));
                for (int r = 0; r < R; ++r)
                    for (int s = 0; s < S; ++s)
                        pkt(r, s, v) *= rot;
            }
        return pkt;
    }

    // Linear interpolation of a skeleton track, held constant outside its time span
    inline SkeletonFrame interpolate_skeleton(const std::vector<SkeletonFrame> &track, double t)
    {
        if (track.empty())
            throw std::invalid_argument("interpolate_skeleton: empty track.");
        SkeletonFrame out;
        out.timestamp_s = t;
        if (t <= track.front().timestamp_s)
        {
            out.joints_m = track.front().joints_m;
            return out;
        }
        if (t >= track.back().timestamp_s)
        {
            out.joints_m = track.back().joints_m;
            return out;
        }
        const auto it = std::upper_bound(track.begin(), track.end(), t, [](double v, const SkeletonFrame &f)
                                         { return v < f.timestamp_s; });
        const SkeletonFrame &b = *it;
        const SkeletonFrame &a = *(it - 1);
        const double w = (t - a.timestamp_s) / (b.timestamp_s - a.timestamp_s);
        for (int j = 0; j < num_joints; ++j)
            out.joints_m[std::size_t(j)] = (1.0 - w) * a.joints_m[std::size_t(j)] + w * b.joints_m[std::size_t(j)];
        return out;
    }

    struct Trace
    {
        double packet_rate_hz = 0.0;
        std::vector<int> rx_ids;                       // ascending
        std::map<int, std::vector<CsiPacket>> packets; // per receiver, in time order
        std::vector<SkeletonFrame> labels;             // interpolated skeleton at each packet time (empty for static scenes)

        std::size_t packet_count() const { return packets.empty() ? 0 : packets.begin()->second.size(); }
    };

    inline void validate_scenario(const Scenario &sc)
    {
        if (!(sc.packet_rate_hz > 0.0))
            throw std::invalid_argument("scenario: packet_rate_hz must be positive.");
        if (sc.skeleton_track.empty() && !sc.allow_static)
            throw std::invalid_argument("scenario: empty skeleton track (set allow_static for static-only scenes).");
        for (std::size_t i = 1; i < sc.skeleton_track.size(); ++i)
            if (!(sc.skeleton_track[i].timestamp_s > sc.skeleton_track[i - 1].timestamp_s))
                throw std::invalid_argument("scenario: skeleton timestamps must be strictly increasing.");
        if (sc.p_visible < 0.0 || sc.p_visible > 1.0)
            throw std::invalid_argument("scenario: p_visible must lie in [0,1].");
        const auto v = validate(sc.layout, sc.config, ParamGrid{});
        if (!v.empty())
            throw std::invalid_argument("scenario: " + v.front().field + " violates " + v.front().rule + ".");
    }

    inline std::size_t scenario_packet_count(const Scenario &sc)
    {
        double duration = sc.duration_s;
        if (!(duration > 0.0))
        {
            const auto &tr = sc.skeleton_track;
            if (tr.size() >= 2)
            {
                const double span = tr.back().timestamp_s - tr.front().timestamp_s;
                duration = span + span / double(tr.size() - 1);
            }
            else
                duration = 1.0 / sc.packet_rate_hz;
        }
        return std::size_t(std::max<long long>(1, std::llround(duration * sc.packet_rate_hz)));
    }

    // Packets at packet_rate_hz for every receiver, with skeleton labels at packet times.
    // The output is a pure function of the scenario, independent of `threads`.
    inline Trace synthesize_trace(const Scenario &sc, int threads = 1)
    {
        validate_scenario(sc);
        const std::size_t n = scenario_packet_count(sc);
        const double t0 = sc.skeleton_track.empty() ? 0.0 : sc.skeleton_track.front().timestamp_s;

        Trace trace;
        trace.packet_rate_hz = sc.packet_rate_hz;
        for (const auto &rx : sc.layout.rx_devices)
            trace.rx_ids.push_back(rx.rx_id);
        std::sort(trace.rx_ids.begin(), trace.rx_ids.end());

        std::vector<double> times(n);
        for (std::size_t k = 0; k < n; ++k)
            times[k] = t0 + double(k) / sc.packet_rate_hz;
        std::vector<SkeletonFrame> frames;
        if (!sc.skeleton_track.empty())
        {
            frames.reserve(n);
            for (std::size_t k = 0; k < n; ++k)
                frames.push_back(interpolate_skeleton(sc.skeleton_track, times[k]));
        }

        std::vector<std::vector<CsiPacket>> per_rx(trace.rx_ids.size());
        parallel_for(int(trace.rx_ids.size()), threads, [&](int i)
                     {
            const int rx_id = trace.rx_ids[std::size_t(i)];
            const auto it = sc.static_paths_per_rx.find(rx_id);
            const std::vector<PathParams> no_paths;
            const std::vector<PathParams> &static_paths = it == sc.static_paths_per_rx.end() ? no_paths : it->second;

            double reference = 0.0;
            for (const auto &p : static_paths)
                reference = std::max(reference, std::abs(p.gain));
            if (reference == 0.0 && !frames.empty())
                for (const auto &p : skeleton_to_paths(frames.front(), sc.layout, rx_id, sc.config, sc.rng_seed, sc.reflectivity,
                                                       sc.reflection_scale_m))
                    reference = std::max(reference, std::abs(p.gain));
            const double sigma = sc.snr_db ? noise_sigma_for_snr(reference, *sc.snr_db) : 0.0;

            auto &out = per_rx[std::size_t(i)];
            out.reserve(n);
            for (std::size_t k = 0; k < n; ++k)
            {
                std::mt19937_64 rng(derive_seed(sc.rng_seed, {0x20ULL, std::uint64_t(rx_id), std::uint64_t(k)}));
                std::uniform_real_distribution<double> uni(0.0, 1.0);

                std::vector<PathParams> paths = static_paths;
                if (!frames.empty())
                {
                    const auto body = skeleton_to_paths(frames[k], sc.layout, rx_id, sc.config, sc.rng_seed, sc.reflectivity,
                                                        sc.reflection_scale_m);
                    for (const auto &p : body)
                        if (uni(rng) < sc.p_visible)
                            paths.push_back(p);
                }

                PhaseOffsets offsets;
                if (sc.inject_sto)
                {
                    offsets.common_offset_rad = -pi + 2.0 * pi * uni(rng);
                    offsets.sto_slope_rad_per_subcarrier =
                        -2.0 * pi * sc.config.subcarrier_spacing_hz * sc.max_sto_delay_s * uni(rng);
                }

                CsiPacket pkt = synthesize_packet(paths, sc.layout, sc.config, rx_id, sigma, offsets,
                                                  derive_seed(sc.rng_seed, {0x30ULL, std::uint64_t(rx_id), std::uint64_t(k)}));
                pkt.timestamp_s = times[k];
                out.push_back(std::move(pkt));
            } });

        for (std::size_t i = 0; i < trace.rx_ids.size(); ++i)
            trace.packets[trace.rx_ids[i]] = std::move(per_rx[i]);
        trace.labels = std::move(frames);
        return trace;
    }

    struct RoomBounds
    {
        double x_min = 2.0, x_max = 7.0;
        double y_min = 1.5, y_max = 3.5;
    };

    // Walking subject: the pelvis follows a smooth, speed-limited random walk inside the
    // bounds; arms and legs swing with the gait plus slow random arm gestures.
    inline std::vector<SkeletonFrame> random_walk_skeleton(double duration_s, double frame_rate_hz, const RoomBounds &bounds,
                                                           std::uint64_t seed)
    {
        if (!(duration_s > 0.0))
            throw std::invalid_argument("random_walk_skeleton: duration must be positive.");
        if (!(frame_rate_hz > 0.0))
            throw std::invalid_argument("random_walk_skeleton: frame rate must be positive.");
        if (!(bounds.x_max > bounds.x_min) || !(bounds.y_max > bounds.y_min))
            throw std::invalid_argument("random_walk_skeleton: empty room bounds.");

        const int n = std::max(1, int(std::floor(duration_s * frame_rate_hz + 1e-9)));
        const double dt = 1.0 / frame_rate_hz;
        std::mt19937_64 rng(derive_seed(seed, {0x40ULL}));
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::normal_distribution<double> normal(0.0, 1.0);

        constexpr double max_speed = 0.8;        // m/s
        constexpr double max_turn_rate = pi / 2; // rad/s
        constexpr double upper_arm = 0.28, forearm = 0.26, thigh = 0.44, shank = 0.42;

        double x = bounds.x_min + (bounds.x_max - bounds.x_min) * uni(rng);
        double y = bounds.y_min + (bounds.y_max - bounds.y_min) * uni(rng);
        double vx = 0.0, vy = 0.0;
        double heading = 2.0 * pi * uni(rng);
        double gait_phase = 2.0 * pi * uni(rng);
        const double gesture_freq_l = 0.2 + 0.3 * uni(rng), gesture_freq_r = 0.2 + 0.3 * uni(rng);
        const double gesture_amp_l = 1.2 * uni(rng), gesture_amp_r = 1.2 * uni(rng);
        const double gesture_phase_l = 2.0 * pi * uni(rng), gesture_phase_r = 2.0 * pi * uni(rng);

        std::vector<SkeletonFrame> out;
        out.reserve(std::size_t(n));
        for (int i = 0; i < n; ++i)
        {
            const double t = double(i) * dt;
            if (i > 0)
            {
                // Ornstein-Uhlenbeck velocity, continuous-time parameters so the motion is rate independent
                const double relax = std::exp(-dt / 2.0);
                const double kick = 0.5 * std::sqrt(1.0 - relax * relax);
                vx = relax * vx + kick * normal(rng);
                vy = relax * vy + kick * normal(rng);
                const double speed = std::hypot(vx, vy);
                if (speed > max_speed)
                {
                    vx *= max_speed / speed;
                    vy *= max_speed / speed;
                }
                x += vx * dt;
                y += vy * dt;
                if (x < bounds.x_min) { x = 2.0 * bounds.x_min - x; vx = -vx; }
                if (x > bounds.x_max) { x = 2.0 * bounds.x_max - x; vx = -vx; }
                if (y < bounds.y_min) { y = 2.0 * bounds.y_min - y; vy = -vy; }
                if (y > bounds.y_max) { y = 2.0 * bounds.y_max - y; vy = -vy; }
                x = std::clamp(x, bounds.x_min, bounds.x_max);
                y = std::clamp(y, bounds.y_min, bounds.y_max);

                if (std::hypot(vx, vy) > 0.05)
                {
                    const double target = std::atan2(vy, vx);
                    const double diff = std::remainder(target - heading, 2.0 * pi);
                    const double limit = max_turn_rate * dt;
                    heading += std::clamp(diff, -limit, limit);
                }
                gait_phase += 2.0 * pi * 1.8 * (std::hypot(vx, vy) / max_speed) * dt;
            }

            const double speed_frac = std::hypot(vx, vy) / max_speed;
            const double leg_swing = 0.35 * speed_frac * std::sin(gait_phase);
            const double arm_swing = 0.3 * speed_frac * std::sin(gait_phase);
            const double lift_l = gesture_amp_l * 0.5 * (1.0 - std::cos(2.0 * pi * gesture_freq_l * t + gesture_phase_l));
            const double lift_r = gesture_amp_r * 0.5 * (1.0 - std::cos(2.0 * pi * gesture_freq_r * t + gesture_phase_r));

            const Vec3 fwd(std::cos(heading), std::sin(heading), 0.0);
            const Vec3 left(-std::sin(heading), std::cos(heading), 0.0);
            const Vec3 up = Vec3::UnitZ();
            const Vec3 base(x, y, 0.0);
            auto body = [&](double f, double l, double u)
            { return Vec3(base + f * fwd + l * left + u * up); };
            // limb segment hanging from `from`, rotated forward by `angle` about the lateral axis
            auto segment = [&](const Vec3 &from, double angle, double len)
            { return Vec3(from + len * (std::sin(angle) * fwd - std::cos(angle) * up)); };

            SkeletonFrame fr;
            fr.timestamp_s = t;
            auto &J = fr.joints_m;
            J[std::size_t(Joint::Head)] = body(0.0, 0.0, 1.62);
            J[std::size_t(Joint::Spine)] = body(0.0, 0.0, 1.20);
            J[std::size_t(Joint::LShoulder)] = body(0.0, 0.19, 1.42);
            J[std::size_t(Joint::RShoulder)] = body(0.0, -0.19, 1.42);
            const double la = -arm_swing + lift_l, ra = arm_swing + lift_r;
            J[std::size_t(Joint::LElbow)] = segment(J[std::size_t(Joint::LShoulder)], la, upper_arm);
            J[std::size_t(Joint::LWrist)] = segment(J[std::size_t(Joint::LElbow)], la + 0.3, forearm);
            J[std::size_t(Joint::RElbow)] = segment(J[std::size_t(Joint::RShoulder)], ra, upper_arm);
            J[std::size_t(Joint::RWrist)] = segment(J[std::size_t(Joint::RElbow)], ra + 0.3, forearm);
            J[std::size_t(Joint::LHip)] = body(0.0, 0.10, 0.92);
            J[std::size_t(Joint::RHip)] = body(0.0, -0.10, 0.92);
            J[std::size_t(Joint::LKnee)] = segment(J[std::size_t(Joint::LHip)], leg_swing, thigh);
            J[std::size_t(Joint::LAnkle)] = segment(J[std::size_t(Joint::LKnee)], leg_swing - 0.2 * std::abs(leg_swing), shank);
            J[std::size_t(Joint::RKnee)] = segment(J[std::size_t(Joint::RHip)], -leg_swing, thigh);
            J[std::size_t(Joint::RAnkle)] = segment(J[std::size_t(Joint::RKnee)], -leg_swing - 0.2 * std::abs(leg_swing), shank);
            out.push_back(fr);
        }
        return out;
    }

    // Largest joint displacement between consecutive frames (meters)
    inline double max_adjacent_displacement(const std::vector<SkeletonFrame> &track)
    {
        double worst = 0.0;
        for (std::size_t i = 1; i < track.size(); ++i)
            for (int j = 0; j < num_joints; ++j)
                worst = std::max(worst, (track[i].joints_m[std::size_t(j)] - track[i - 1].joints_m[std::size_t(j)]).norm());
        return worst;
    }
}

#endif
