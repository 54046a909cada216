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

#ifndef CSIAOA_ABLATION_HPP
#define CSIAOA_ABLATION_HPP

#include "parallel.hpp"
#include "random.hpp"
#include "spectrum.hpp"
#include "synthesizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace csiaoa
{
    enum class AblationAxis
    {
        receivers,
        subcarriers,
        tx_antennas,
        aoa_dim
    };

    inline AblationAxis parse_ablation_axis(const std::string &s)
    {
        if (s == "receivers")
            return AblationAxis::receivers;
        if (s == "subcarriers")
            return AblationAxis::subcarriers;
        if (s == "tx_antennas")
            return AblationAxis::tx_antennas;
        if (s == "aoa_dim")
            return AblationAxis::aoa_dim;
        throw std::invalid_argument("unknown ablation axis '" + s + "'.");
    }

    struct AblationOptions
    {
        int scenes = 50;
        std::uint64_t seed = 2024;
        double snr_db = 20.0;
        int packets = 10;
        int default_receivers = 1; // for axes other than `receivers`
        ParamGrid grid;            // ToF grid must cover the body path delays
        int threads = 1;
        RoomBounds room;
        double z_min = 0.3, z_max = 1.8;
        double body_scale_m = 4.0; // body reflection amplitude scale, comparable to the ceiling path
    };

    struct AblationRow
    {
        int level = 0;
        double mean_angular_error_deg = 0.0;
        double mean_position_error_m = 0.0; // NaN for the 1D level of aoa_dim
        int scenes = 0;
    };

    // One seeded benchmark scene: a body point plus the room's static paths
    struct BenchmarkScene
    {
        Vec3 body_m;
        std::uint64_t seed = 0;
    };

    inline std::vector<BenchmarkScene> benchmark_scenes(const AblationOptions &opt)
    {
        std::vector<BenchmarkScene> out;
        for (int i = 0; i < opt.scenes; ++i)
        {
            std::mt19937_64 rng(derive_seed(opt.seed, {0x50ULL, std::uint64_t(i)}));
            std::uniform_real_distribution<double> u(0.0, 1.0);
            BenchmarkScene s;
            s.body_m = Vec3(opt.room.x_min + (opt.room.x_max - opt.room.x_min) * u(rng),
                            opt.room.y_min + (opt.room.y_max - opt.room.y_min) * u(rng), opt.z_min + (opt.z_max - opt.z_min) * u(rng));
            s.seed = derive_seed(opt.seed, {0x51ULL, std::uint64_t(i)});
            out.push_back(s);
        }
        return out;
    }

    // Unit direction from (azimuth, elevation) in a receiver frame, expressed in world coordinates
    inline Vec3 direction_world(const RxDevice &rx, double azimuth_deg, double elevation_deg)
    {
        const double st = sin_deg(elevation_deg);
        return st * cos_deg(azimuth_deg) * rx.x_axis + st * sin_deg(azimuth_deg) * rx.y_axis + cos_deg(elevation_deg) * rx.normal();
    }

    inline double angle_between_deg(const Vec3 &a, const Vec3 &b)
    {
        return deg_from_rad(std::atan2(a.cross(b).norm(), a.dot(b)));
    }

    // Range from the receiver along u for a bistatic path length L
    inline double bistatic_range(double path_length_m, const Vec3 &rx, const Vec3 &tx, const Vec3 &u)
    {
        const Vec3 w = rx - tx;
        const double den = 2.0 * (path_length_m + w.dot(u));
        if (!(den > 0.0))
            return 0.0;
        return std::clamp((path_length_m * path_length_m - w.squaredNorm()) / den, 0.0, 50.0);
    }

    namespace detail
    {
        struct LevelSetup
        {
            DeviceLayout layout;
            ChannelConfig config;
            int vs = 20;
            int receivers = 1;
            bool one_dimensional = false;
        };

        inline LevelSetup level_setup(AblationAxis axis, int level, const AblationOptions &opt)
        {
            LevelSetup s;
            s.receivers = opt.default_receivers;
            int tx = 3;
            switch (axis)
            {
            case AblationAxis::receivers:
                if (level < 1 || level > 4)
                    throw std::invalid_argument("ablate: receivers level must be in [1, 4].");
                s.receivers = level;
                break;
            case AblationAxis::subcarriers:
                if (level < 1 || level > 30)
                    throw std::invalid_argument("ablate: subcarriers level must be in [1, 30].");
                s.config.num_subcarriers = level;
                break;
            case AblationAxis::tx_antennas:
                if (level < 1 || level > 3)
                    throw std::invalid_argument("ablate: tx_antennas level must be in [1, 3].");
                tx = level;
                break;
            case AblationAxis::aoa_dim:
                if (level != 1 && level != 2)
                    throw std::invalid_argument("ablate: aoa_dim level must be 1 or 2.");
                s.one_dimensional = level == 1;
                break;
            }
            s.layout = default_layout(s.config, std::max(s.receivers, 1));
            s.layout.tx_array = linear_tx_array(s.config.wavelength_m() / 2.0, tx);
            s.vs = (2 * s.config.num_subcarriers + 2) / 3; // ceil(2V/3)
            return s;
        }

        // Cone angle from the receive array's x axis
        inline double cone_angle_deg(double ux) { return deg_from_rad(std::asin(std::clamp(ux, -1.0, 1.0))); }
    }

    // Estimator-only benchmark over seeded single-body scenes with LoS and ceiling paths.
    // Angular error: angle between the true body direction and the nearest detected peak,
    // averaged over receivers (90 degrees when nothing is detected). Position: each receiver
    // turns its peak and the best ToF at that cell into a point; points are averaged.
    inline AblationRow ablate_level(AblationAxis axis, int level, const AblationOptions &opt)
    {
        const auto setup = detail::level_setup(axis, level, opt);
        const auto scenes = benchmark_scenes(opt);
        const auto statics = default_static_paths(setup.layout, setup.config);
        const JointArray arr = joint_array(setup.layout, setup.config, setup.vs);

        std::vector<double> ang(scenes.size(), 0.0), pos(scenes.size(), 0.0);
        parallel_for(int(scenes.size()), opt.threads, [&](int i)
                     {
            const auto &scene = scenes[std::size_t(i)];
            Vec3 estimate = Vec3::Zero();
            double angular = 0.0;
            for (int r = 0; r < setup.receivers; ++r)
            {
                const RxDevice &rx = setup.layout.rx_devices[std::size_t(r)];
                std::vector<PathParams> paths = statics.at(rx.rx_id);
                const PathParams body = reflection_path(scene.body_m, 1.0, setup.layout, rx.rx_id, setup.config,
                                                        joint_phase(scene.seed, rx.rx_id, 0), opt.body_scale_m);
                paths.push_back(body);
                const double ref = std::max(std::abs(paths[0].gain), std::abs(paths[1].gain));
                const double sigma = noise_sigma_for_snr(ref, opt.snr_db);
                std::vector<CsiPacket> packets;
                for (int k = 0; k < opt.packets; ++k)
                    packets.push_back(synthesize_packet(paths, setup.layout, setup.config, rx.rx_id, sigma, {},
                                                        derive_seed(scene.seed, {0x52ULL, std::uint64_t(rx.rx_id), std::uint64_t(k)})));

                const Vec3 truth_dir = (scene.body_m - rx.origin_m).normalized();
                if (setup.one_dimensional)
                {
                    const ArrayGeometry pair = linear_tx_array(setup.layout.rx_array.spacing_m, 2);
                    const Spectrum1D s1 = music_spectrum_1d(packets, GridAxis{-90.0, 1.0, 181}, pair, setup.config, {0, 1});
                    const auto peaks = detect_peaks_1d(s1, int(paths.size()), 0.0);
                    const double truth = detail::cone_angle_deg(truth_dir.dot(rx.x_axis));
                    double best = 90.0;
                    for (const auto &p : peaks)
                        best = std::min(best, std::abs(p.angle_deg - truth));
                    angular += best;
                    continue;
                }

                const CovarianceEstimate cov = smoothed_covariance(packets, setup.vs);
                const NoiseSubspace ns = noise_subspace(cov);
                const AoaSpectrum spec = music_spectrum_2d(ns, opt.grid, arr);
                const auto peaks = detect_peaks(spec, int(paths.size()), 0.0);
                double best = 90.0;
                const Peak *match = nullptr;
                for (const auto &p : peaks)
                {
                    const double e = axis == AblationAxis::aoa_dim
                                         ? std::abs(detail::cone_angle_deg(direction_world(rx, p.azimuth_deg, p.elevation_deg).dot(rx.x_axis)) -
                                                    detail::cone_angle_deg(truth_dir.dot(rx.x_axis)))
                                         : angle_between_deg(direction_world(rx, p.azimuth_deg, p.elevation_deg), truth_dir);
                    if (e < best)
                    {
                        best = e;
                        match = &p;
                    }
                }
                angular += best;
                if (match)
                {
                    const auto slice = cell_spectrum(ns, opt.grid, arr, match->az_index, match->el_index);
                    const auto t = std::size_t(std::max_element(slice.begin(), slice.end()) - slice.begin()) %
                                   std::size_t(opt.grid.tof_s.count);
                    const double L = ChannelConfig::speed_of_light * opt.grid.tof_s.at(int(t));
                    const Vec3 u = direction_world(rx, match->azimuth_deg, match->elevation_deg);
                    estimate += rx.origin_m + bistatic_range(L, rx.origin_m, setup.layout.tx_origin_m, u) * u;
                }
                else
                    estimate += rx.origin_m;
            }
            ang[std::size_t(i)] = angular / double(setup.receivers);
            pos[std::size_t(i)] = (estimate / double(setup.receivers) - scene.body_m).norm(); });

        AblationRow row;
        row.level = level;
        row.scenes = int(scenes.size());
        for (std::size_t i = 0; i < scenes.size(); ++i)
        {
            row.mean_angular_error_deg += ang[i];
            row.mean_position_error_m += pos[i];
        }
        row.mean_angular_error_deg /= double(scenes.size());
        row.mean_position_error_m = setup.one_dimensional ? std::nan("") : row.mean_position_error_m / double(scenes.size());
        return row;
    }

    inline std::vector<AblationRow> ablate(AblationAxis axis, const std::vector<int> &levels, const AblationOptions &opt = {})
    {
        if (levels.empty())
            throw std::invalid_argument("ablate: no levels.");
        std::vector<AblationRow> rows;
        for (int l : levels)
            rows.push_back(ablate_level(axis, l, opt));
        return rows;
    }
}

#endif
