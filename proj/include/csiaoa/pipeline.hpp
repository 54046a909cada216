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

#ifndef CSIAOA_PIPELINE_HPP
#define CSIAOA_PIPELINE_HPP

#include "binary_io.hpp"
#include "calibration.hpp"
#include "environment.hpp"
#include "errors.hpp"
#include "fusion.hpp"
#include "parallel.hpp"
#include "scenario_json.hpp"
#include "spectrum.hpp"
#include "synthesizer.hpp"
#include "trace_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace csiaoa
{
    // Process exit codes shared by the CLI and the pipeline
    enum ExitCode
    {
        exit_ok = 0,
        exit_config = 2,
        exit_format = 3,
        exit_numeric = 4
    };

    inline int exit_code_for(const std::exception &e)
    {
        if (dynamic_cast<const format_error *>(&e))
            return exit_format;
        if (dynamic_cast<const std::invalid_argument *>(&e))
            return exit_config;
        return exit_numeric;
    }

    class PipelineError : public std::runtime_error
    {
    public:
        PipelineError(const std::string &stage, long window, const std::exception &cause)
            : std::runtime_error("pipeline stage '" + stage + "'" + (window >= 0 ? " window " + std::to_string(window) : std::string()) +
                                 ": " + cause.what()),
              stage_(stage), window_(window), code_(exit_code_for(cause)) {}

        const std::string &stage() const noexcept { return stage_; }
        long window() const noexcept { return window_; }
        int exit_code() const noexcept { return code_; }

    private:
        std::string stage_;
        long window_;
        int code_;
    };

    // One spectrum per packet in [first, first + count). The covariance for packet k uses
    // the W packets ending at k, shifted forward near the start of the trace so every
    // window is full. Packets are expected to be calibrated already.
    inline std::vector<AoaSpectrum> packet_spectra(const std::vector<CsiPacket> &packets, std::size_t first, std::size_t count,
                                                   const DeviceLayout &layout, const ChannelConfig &config,
                                                   const EstimatorConfig &est, int threads = 1)
    {
        if (first + count > packets.size())
            throw std::invalid_argument("packet_spectra: range exceeds the trace.");
        const std::size_t n = packets.size();
        const std::size_t W = std::min<std::size_t>(std::size_t(std::max(est.packets_per_window, 1)), n);
        EstimatorConfig single = est;
        single.calibrate = false;
        single.threads = 1;
        std::vector<AoaSpectrum> out(count);
        parallel_for(int(count), threads, [&](int i)
                     {
            const std::size_t k = first + std::size_t(i);
            const std::size_t start = std::min(k + 1 >= W ? k + 1 - W : 0, n - W);
            const std::vector<CsiPacket> window(packets.begin() + std::ptrdiff_t(start),
                                                packets.begin() + std::ptrdiff_t(start + W));
            AoaSpectrum s = estimate_spectrum(window, layout, config, single);
            s.rx_id = packets[k].rx_id;
            s.packet_index = int(k);
            out[std::size_t(i)] = std::move(s); });
        return out;
    }

    struct ManifestEntry
    {
        std::string tensor;
        std::optional<int> label_row;
        std::uint64_t fnv1a64 = 0;
        double window_start_time_s = 0.0;
    };

    struct Manifest
    {
        std::uint64_t seed = 0;
        int num_receivers = 0;
        int packets_per_tensor = 0;
        std::vector<std::uint32_t> shape;
        std::string labels_file;
        std::map<int, std::string> profiles;
        std::vector<ManifestEntry> windows;

        nlohmann::json to_json() const
        {
            nlohmann::json j;
            j["seed"] = seed;
            j["num_receivers"] = num_receivers;
            j["packets_per_tensor"] = packets_per_tensor;
            j["shape"] = shape;
            j["labels"] = labels_file;
            for (const auto &[rx, p] : profiles)
                j["profiles"][std::to_string(rx)] = p;
            j["windows"] = nlohmann::json::array();
            for (const auto &w : windows)
            {
                char hex[17];
                std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(w.fnv1a64));
                nlohmann::json e{{"tensor", w.tensor}, {"fnv1a64", hex}, {"window_start_time_s", w.window_start_time_s}};
                e["label_row"] = w.label_row ? nlohmann::json(*w.label_row) : nlohmann::json(nullptr);
                j["windows"].push_back(e);
            }
            return j;
        }
    };

    // Index of the skeleton frame nearest to time t (first one on ties)
    inline std::size_t nearest_frame(const std::vector<SkeletonFrame> &track, double t)
    {
        std::size_t best = 0;
        for (std::size_t i = 1; i < track.size(); ++i)
            if (std::abs(track[i].timestamp_s - t) < std::abs(track[best].timestamp_s - t))
                best = i;
        return best;
    }

    // synthesize -> calibrate -> per-packet spectrum -> subtract static profile -> fuse -> write
    inline Manifest run_pipeline(const PipelineConfig &pc, const std::string &output_dir, int threads = 1)
    {
        namespace fs = std::filesystem;
        const Scenario &sc = pc.scenario;
        const EstimatorConfig &est = pc.estimator;
        std::string stage;
        long window = -1;
        try
        {
            stage = "setup";
            fs::create_directories(fs::path(output_dir) / "tensors");
            fs::create_directories(fs::path(output_dir) / "profiles");

            stage = "synthesize";
            const Trace live = synthesize_trace(sc, threads);

            stage = "baseline";
            Scenario empty = sc;
            empty.skeleton_track.clear();
            empty.allow_static = true;
            empty.duration_s = pc.baseline_duration_s;
            empty.rng_seed = sc.rng_seed + 1;
            const Trace baseline = synthesize_trace(empty, threads);
            const auto profiles = build_static_profile(baseline.packets, sc.layout, sc.config, est, pc.profile_average);

            stage = "calibrate";
            std::map<int, std::vector<CsiPacket>> packets;
            for (const auto &[rx_id, list] : live.packets)
                packets[rx_id] = est.calibrate ? calibrate_packets(list, est.calibration) : list;

            Manifest m;
            m.seed = sc.rng_seed;
            m.num_receivers = int(packets.size());
            m.packets_per_tensor = pc.packets_per_tensor;
            for (const auto &[rx_id, prof] : profiles)
            {
                const std::string rel = "profiles/rx_" + std::to_string(rx_id) + ".gps";
                write_tensor(spectrum_to_tensor(prof.spectrum, true, prof.created_at_s), (fs::path(output_dir) / rel).string());
                m.profiles[rx_id] = rel;
            }

            const std::size_t n = live.packet_count();
            const std::size_t P = std::size_t(pc.packets_per_tensor);
            const std::size_t stride = std::size_t(pc.tensor_stride);
            std::vector<SkeletonFrame> label_rows;
            for (std::size_t start = 0; start + P <= n; start += stride)
            {
                window = long(m.windows.size());
                std::map<int, std::vector<AoaSpectrum>> spectra;
                stage = "spectrum";
                for (const auto &[rx_id, list] : packets)
                    spectra[rx_id] = packet_spectra(list, start, P, sc.layout, sc.config, est, threads);
                stage = "subtract";
                for (auto &[rx_id, list] : spectra)
                    for (auto &s : list)
                        s = subtract_static(s, profiles.at(rx_id));
                stage = "fuse";
                const double t0 = packets.begin()->second[start].timestamp_s;
                const FusionTensor t = fuse_window(spectra, t0);

                stage = "write";
                char name[64];
                std::snprintf(name, sizeof name, "tensors/window_%05zu.gps", m.windows.size());
                const fs::path file = fs::path(output_dir) / name;
                write_tensor(t, file.string());
                ManifestEntry e;
                e.tensor = name;
                e.fnv1a64 = io::fnv1a64_file(file.string());
                e.window_start_time_s = t0;
                if (!sc.skeleton_track.empty())
                {
                    const double t1 = packets.begin()->second[start + P - 1].timestamp_s;
                    e.label_row = int(label_rows.size());
                    label_rows.push_back(sc.skeleton_track[nearest_frame(sc.skeleton_track, 0.5 * (t0 + t1))]);
                }
                m.shape = t.data.dims;
                m.windows.push_back(e);
            }
            window = -1;

            stage = "write";
            m.labels_file = "labels.txt";
            write_labels(label_rows, (fs::path(output_dir) / m.labels_file).string());
            std::ofstream mf(fs::path(output_dir) / "manifest.json", std::ios::binary | std::ios::trunc);
            if (!mf)
                throw std::runtime_error("cannot write manifest.json");
            mf << m.to_json().dump(2) << '\n';
            return m;
        }
        catch (const PipelineError &)
        {
            throw;
        }
        catch (const std::exception &ex)
        {
            throw PipelineError(stage, window, ex);
        }
    }

    inline Manifest run_pipeline(const std::string &scenario_config_path, const std::string &output_dir, int threads = 1)
    {
        PipelineConfig pc;
        try
        {
            pc = load_pipeline_config(scenario_config_path);
        }
        catch (const std::exception &ex)
        {
            throw PipelineError("config", -1, ex);
        }
        return run_pipeline(pc, output_dir, threads);
    }
}

#endif
