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

#ifndef CSIAOA_SCENARIO_JSON_HPP
#define CSIAOA_SCENARIO_JSON_HPP

#include "environment.hpp"
#include "spectrum.hpp"
#include "synthesizer.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>

namespace csiaoa
{
    // Everything a pipeline run needs, decoded from one JSON document
    struct PipelineConfig
    {
        Scenario scenario;
        EstimatorConfig estimator;
        int packets_per_tensor = 100;
        int tensor_stride = 100;
        double baseline_duration_s = 0.1; // empty-scene capture for the static profile
        ProfileAverage profile_average = ProfileAverage::mean;
    };

    namespace detail
    {
        using nlohmann::json;

        inline Vec3 vec3(const json &j, const char *what)
        {
            if (!j.is_array() || j.size() != 3)
                throw std::invalid_argument(std::string(what) + ": expected an array of 3 numbers.");
            return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
        }

        inline GridAxis axis(const json &j, const char *what)
        {
            if (!j.is_array() || j.size() != 3)
                throw std::invalid_argument(std::string(what) + ": expected [start, step, count].");
            return GridAxis{j[0].get<double>(), j[1].get<double>(), j[2].get<int>()};
        }

        inline PathParams path(const json &j)
        {
            PathParams p;
            p.azimuth_deg = j.at("azimuth_deg").get<double>();
            p.elevation_deg = j.at("elevation_deg").get<double>();
            p.aod_deg = j.at("aod_deg").get<double>();
            p.tof_s = j.at("tof_s").get<double>();
            const auto &g = j.at("gain");
            if (g.is_array() && g.size() == 2)
                p.gain = cd(g[0].get<double>(), g[1].get<double>());
            else
                p.gain = g.get<double>();
            return p;
        }
    }

    // Schema (all keys optional unless noted):
    //   seed, packet_rate_hz, duration_s, snr_db (null = noiseless), inject_sto, p_visible
    //   channel:   carrier_freq_hz, subcarrier_spacing_hz, num_subcarriers
    //   layout:    num_receivers | { tx_origin_m, tx_axis, tx_antennas, tx_spacing_m, rx_spacing_m,
    //                                receivers: [{rx_id, origin_m, x_axis, y_axis}] }
    //   motion:    { type: "random_walk" | "none", duration_s, frame_rate_hz, room: {x: [lo,hi], y: [lo,hi]} }
    //   static_paths: "default" | "none" | { "<rx_id>": [{azimuth_deg, elevation_deg, aod_deg, tof_s, gain}] }
    //   estimator: vs, packets_per_window, diagonal_loading, model_order_ratio, calibrate,
    //              grid: {azimuth_deg, elevation_deg, aod_deg, tof_s} as [start, step, count]
    //   fusion:    packets_per_tensor, stride, baseline_duration_s, profile_average ("mean" | "median")
    inline PipelineConfig parse_pipeline_config(const nlohmann::json &j)
    {
        using detail::json;
        try
        {
            if (!j.is_object())
                throw std::invalid_argument("config: top level must be an object.");
            PipelineConfig pc;
            Scenario &sc = pc.scenario;
            sc.rng_seed = j.value("seed", std::uint64_t(0));
            sc.packet_rate_hz = j.value("packet_rate_hz", 1000.0);
            sc.inject_sto = j.value("inject_sto", false);
            sc.p_visible = j.value("p_visible", 0.5);
            sc.duration_s = j.value("duration_s", 0.0);
            if (j.contains("snr_db") && !j["snr_db"].is_null())
                sc.snr_db = j["snr_db"].get<double>();

            if (j.contains("channel"))
            {
                const auto &c = j["channel"];
                sc.config.carrier_freq_hz = c.value("carrier_freq_hz", sc.config.carrier_freq_hz);
                sc.config.subcarrier_spacing_hz = c.value("subcarrier_spacing_hz", sc.config.subcarrier_spacing_hz);
                sc.config.num_subcarriers = c.value("num_subcarriers", sc.config.num_subcarriers);
            }

            const json layout = j.value("layout", json::object());
            sc.layout = default_layout(sc.config, layout.value("num_receivers", 4));
            if (layout.contains("tx_origin_m"))
                sc.layout.tx_origin_m = detail::vec3(layout["tx_origin_m"], "layout.tx_origin_m");
            if (layout.contains("tx_axis"))
                sc.layout.tx_axis = detail::vec3(layout["tx_axis"], "layout.tx_axis");
            const double half_wave = sc.config.wavelength_m() / 2.0;
            sc.layout.tx_array = linear_tx_array(layout.value("tx_spacing_m", half_wave), layout.value("tx_antennas", 3));
            sc.layout.rx_array = l_shaped_array(layout.value("rx_spacing_m", half_wave));
            if (layout.contains("receivers"))
            {
                sc.layout.rx_devices.clear();
                for (const auto &r : layout["receivers"])
                    sc.layout.rx_devices.push_back({r.at("rx_id").get<int>(), detail::vec3(r.at("origin_m"), "origin_m"),
                                                    detail::vec3(r.at("x_axis"), "x_axis"),
                                                    detail::vec3(r.at("y_axis"), "y_axis")});
            }

            const json motion = j.value("motion", json{{"type", "random_walk"}});
            const std::string type = motion.value("type", "random_walk");
            if (type == "random_walk")
            {
                RoomBounds room;
                if (motion.contains("room"))
                {
                    const auto &r = motion["room"];
                    room.x_min = r.at("x").at(0).get<double>();
                    room.x_max = r.at("x").at(1).get<double>();
                    room.y_min = r.at("y").at(0).get<double>();
                    room.y_max = r.at("y").at(1).get<double>();
                }
                const double duration = motion.value("duration_s", sc.duration_s > 0.0 ? sc.duration_s : 1.0);
                sc.skeleton_track = random_walk_skeleton(duration, motion.value("frame_rate_hz", 10.0), room, sc.rng_seed);
                if (!(sc.duration_s > 0.0))
                    sc.duration_s = duration;
            }
            else if (type == "none")
                sc.allow_static = true;
            else
                throw std::invalid_argument("config: unknown motion type '" + type + "'.");

            const json sp = j.value("static_paths", json("default"));
            if (sp.is_string() && sp.get<std::string>() == "default")
                sc.static_paths_per_rx = default_static_paths(sc.layout, sc.config);
            else if (sp.is_string() && sp.get<std::string>() == "none")
                sc.static_paths_per_rx.clear();
            else if (sp.is_object())
                for (const auto &[key, list] : sp.items())
                    for (const auto &p : list)
                        sc.static_paths_per_rx[std::stoi(key)].push_back(detail::path(p));
            else
                throw std::invalid_argument("config: static_paths must be \"default\", \"none\" or an object.");

            EstimatorConfig &est = pc.estimator;
            const json e = j.value("estimator", json::object());
            est.vs = e.value("vs", std::min(20, sc.config.num_subcarriers));
            est.packets_per_window = e.value("packets_per_window", 10);
            est.diagonal_loading = e.value("diagonal_loading", 0.0);
            est.rule.ratio_threshold = e.value("model_order_ratio", 0.01);
            est.calibrate = e.value("calibrate", true);
            // Calibration removes the mean delay, so the residual ToF is centred on zero
            if (est.calibrate)
                est.grid.tof_s = GridAxis{-30e-9, 2e-9, 31};
            if (e.contains("grid"))
            {
                const auto &g = e["grid"];
                if (g.contains("azimuth_deg"))
                    est.grid.azimuth_deg = detail::axis(g["azimuth_deg"], "grid.azimuth_deg");
                if (g.contains("elevation_deg"))
                    est.grid.elevation_deg = detail::axis(g["elevation_deg"], "grid.elevation_deg");
                if (g.contains("aod_deg"))
                    est.grid.aod_deg = detail::axis(g["aod_deg"], "grid.aod_deg");
                if (g.contains("tof_s"))
                    est.grid.tof_s = detail::axis(g["tof_s"], "grid.tof_s");
            }

            const json f = j.value("fusion", json::object());
            pc.packets_per_tensor = f.value("packets_per_tensor", 100);
            pc.tensor_stride = f.value("stride", pc.packets_per_tensor);
            pc.baseline_duration_s = f.value("baseline_duration_s", 0.1);
            const std::string avg = f.value("profile_average", "mean");
            if (avg == "mean")
                pc.profile_average = ProfileAverage::mean;
            else if (avg == "median")
                pc.profile_average = ProfileAverage::median;
            else
                throw std::invalid_argument("config: profile_average must be \"mean\" or \"median\".");

            if (pc.packets_per_tensor < 1 || pc.tensor_stride < 1)
                throw std::invalid_argument("config: packets_per_tensor and stride must be positive.");
            if (est.packets_per_window < 1)
                throw std::invalid_argument("config: packets_per_window must be positive.");
            if (!(pc.baseline_duration_s > 0.0))
                throw std::invalid_argument("config: baseline_duration_s must be positive.");
            const auto violations = validate(sc.layout, sc.config, est.grid);
            if (!violations.empty())
                throw std::invalid_argument("config: " + violations.front().field + " violates " + violations.front().rule + ".");
            if (est.vs < 1 || est.vs > sc.config.num_subcarriers)
                throw std::invalid_argument("config: estimator.vs must be in [1, num_subcarriers].");
            return pc;
        }
        catch (const nlohmann::json::exception &ex)
        {
            throw std::invalid_argument(std::string("config: ") + ex.what());
        }
    }

    inline PipelineConfig load_pipeline_config(const std::string &path)
    {
        std::ifstream f(path);
        if (!f)
            throw std::invalid_argument("config: cannot open '" + path + "'.");
        nlohmann::json j;
        try
        {
            f >> j;
        }
        catch (const nlohmann::json::exception &ex)
        {
            throw std::invalid_argument("config: '" + path + "' is not valid JSON: " + ex.what());
        }
        return parse_pipeline_config(j);
    }
}

#endif
