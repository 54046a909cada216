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

#include <CLI11.hpp>

#include <csiaoa/csiaoa.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace csiaoa;

namespace
{
    struct Globals
    {
        std::optional<std::uint64_t> seed;
        std::string config;
        std::string out = ".";
        int threads = 1;
    };

    struct EstimatorFlags
    {
        int vs = 20;
        int packets_per_window = 10;
        double loading = 0.0;
        double model_order_ratio = 0.01;
        bool no_calibrate = false;
        std::string az, el, aod, tof;

        void add(CLI::App *cmd)
        {
            cmd->add_option("--vs", vs, "Subcarrier smoothing window")->capture_default_str();
            cmd->add_option("--packets-per-window", packets_per_window, "Packets per covariance window")->capture_default_str();
            cmd->add_option("--loading", loading, "Diagonal loading added to the covariance")->capture_default_str();
            cmd->add_option("--model-order-ratio", model_order_ratio, "Eigenvalue ratio for the signal dimension")
                ->capture_default_str();
            cmd->add_flag("--no-calibrate", no_calibrate, "Skip delay calibration");
            cmd->add_option("--grid-az", az, "Azimuth grid start,step,count in degrees");
            cmd->add_option("--grid-el", el, "Elevation grid start,step,count in degrees");
            cmd->add_option("--grid-aod", aod, "Departure grid start,step,count in degrees");
            cmd->add_option("--grid-tof", tof, "Time-of-flight grid start,step,count in seconds");
        }

        static GridAxis parse_axis(const std::string &text, const char *name)
        {
            GridAxis a;
            char tail = 0;
            if (std::sscanf(text.c_str(), "%lf,%lf,%d%c", &a.start, &a.step, &a.count, &tail) != 3)
                throw std::invalid_argument(std::string(name) + ": expected start,step,count, got '" + text + "'.");
            return a;
        }

        EstimatorConfig build(int threads) const
        {
            EstimatorConfig est;
            est.vs = vs;
            est.packets_per_window = packets_per_window;
            est.diagonal_loading = loading;
            est.rule.ratio_threshold = model_order_ratio;
            est.calibrate = !no_calibrate;
            est.threads = threads;
            if (est.calibrate)
                est.grid.tof_s = GridAxis{-30e-9, 2e-9, 31};
            if (!az.empty())
                est.grid.azimuth_deg = parse_axis(az, "--grid-az");
            if (!el.empty())
                est.grid.elevation_deg = parse_axis(el, "--grid-el");
            if (!aod.empty())
                est.grid.aod_deg = parse_axis(aod, "--grid-aod");
            if (!tof.empty())
                est.grid.tof_s = parse_axis(tof, "--grid-tof");
            if (packets_per_window < 1)
                throw std::invalid_argument("--packets-per-window must be positive.");
            return est;
        }
    };

    // Array geometry recorded in a trace; world placement is not needed by the estimator
    DeviceLayout layout_of(const TraceFile &t)
    {
        DeviceLayout layout;
        layout.rx_array = l_shaped_array(t.rx_spacing_m);
        layout.tx_array = linear_tx_array(t.tx_spacing_m, t.num_tx);
        layout.rx_devices.push_back({t.rx_id, Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY()});
        return layout;
    }

    void check_grid(const DeviceLayout &layout, const ChannelConfig &config, const EstimatorConfig &est)
    {
        const auto v = validate(layout, config, est.grid);
        if (!v.empty())
            throw std::invalid_argument(v.front().field + " violates " + v.front().rule + ".");
        if (est.vs < 1 || est.vs > config.num_subcarriers)
            throw std::invalid_argument("--vs must be in [1, num_subcarriers].");
    }

    PipelineConfig load_config(const Globals &g)
    {
        if (g.config.empty())
            throw std::invalid_argument("--config is required.");
        PipelineConfig pc = load_pipeline_config(g.config);
        if (g.seed)
        {
            // the seed drives both the motion track and the packet noise
            std::ifstream f(g.config);
            nlohmann::json j = nlohmann::json::parse(f);
            j["seed"] = *g.seed;
            pc = parse_pipeline_config(j);
        }
        return pc;
    }

    std::vector<std::string> sorted_files(const std::string &dir, const std::string &ext)
    {
        if (!fs::is_directory(dir))
            throw std::invalid_argument("'" + dir + "' is not a directory.");
        std::vector<std::string> out;
        for (const auto &e : fs::directory_iterator(dir))
            if (e.is_regular_file() && e.path().extension() == ext)
                out.push_back(e.path().string());
        std::sort(out.begin(), out.end());
        return out;
    }

    std::string numbered(const std::string &dir, const char *stem, std::size_t i)
    {
        char name[64];
        std::snprintf(name, sizeof name, "%s_%05zu.gps", stem, i);
        return (fs::path(dir) / name).string();
    }

    int cmd_synth(const Globals &g)
    {
        const PipelineConfig pc = load_config(g);
        const Trace trace = synthesize_trace(pc.scenario, g.threads);
        fs::create_directories(g.out);
        for (const auto &[rx_id, packets] : trace.packets)
            write_trace(make_trace_file(rx_id, packets, pc.scenario.layout, pc.scenario.config, trace.packet_rate_hz),
                        (fs::path(g.out) / ("rx_" + std::to_string(rx_id) + ".gpc")).string());
        if (!trace.labels.empty())
            write_labels(trace.labels, (fs::path(g.out) / "labels.txt").string());
        std::printf("wrote %zu receivers x %zu packets to %s\n", trace.packets.size(), trace.packet_count(), g.out.c_str());
        return exit_ok;
    }

    int cmd_calibrate(const Globals &g, const std::vector<std::string> &inputs, bool per_chain)
    {
        fs::create_directories(g.out);
        CalibrationOptions opt;
        opt.per_chain_offset = per_chain;
        for (const auto &in : inputs)
        {
            TraceFile t = read_trace(in);
            t.packets = calibrate_packets(t.packets, opt);
            write_trace(t, (fs::path(g.out) / fs::path(in).filename()).string());
        }
        return exit_ok;
    }

    // Non-overlapping windows of W packets, one 2D spectrum each
    std::vector<AoaSpectrum> window_spectra(const TraceFile &t, const EstimatorConfig &est)
    {
        const DeviceLayout layout = layout_of(t);
        const ChannelConfig config = t.config();
        check_grid(layout, config, est);
        const std::size_t W = std::size_t(est.packets_per_window);
        if (t.packets.size() < W)
            throw std::invalid_argument("trace has fewer packets than --packets-per-window.");
        std::vector<AoaSpectrum> out;
        for (std::size_t start = 0; start + W <= t.packets.size(); start += W)
        {
            const std::vector<CsiPacket> window(t.packets.begin() + std::ptrdiff_t(start),
                                                t.packets.begin() + std::ptrdiff_t(start + W));
            AoaSpectrum s = estimate_spectrum(window, layout, config, est);
            s.packet_index = int(start);
            out.push_back(std::move(s));
        }
        return out;
    }

    int cmd_spectrum(const Globals &g, const std::string &input, const EstimatorFlags &flags)
    {
        const TraceFile t = read_trace(input);
        const auto spectra = window_spectra(t, flags.build(g.threads));
        fs::create_directories(g.out);
        for (std::size_t i = 0; i < spectra.size(); ++i)
            write_tensor(spectrum_to_tensor(spectra[i], false, t.packets[std::size_t(spectra[i].packet_index)].timestamp_s),
                         numbered(g.out, "spectrum", i));
        std::printf("wrote %zu spectra to %s\n", spectra.size(), g.out.c_str());
        return exit_ok;
    }

    int cmd_rebaseline(const Globals &g, const std::vector<std::string> &inputs, const EstimatorFlags &flags, bool median)
    {
        const EstimatorConfig est = flags.build(g.threads);
        fs::create_directories(g.out);
        for (const auto &in : inputs)
        {
            const TraceFile t = read_trace(in);
            const DeviceLayout layout = layout_of(t);
            check_grid(layout, t.config(), est);
            const auto profiles = build_static_profile({{t.rx_id, t.packets}}, layout, t.config(), est,
                                                       median ? ProfileAverage::median : ProfileAverage::mean);
            const auto &p = profiles.at(t.rx_id);
            const auto path = (fs::path(g.out) / ("rx_" + std::to_string(t.rx_id) + ".gps")).string();
            write_tensor(spectrum_to_tensor(p.spectrum, true, p.created_at_s), path);
            std::printf("profile for rx %d from %d packets -> %s\n", t.rx_id, p.source_packet_count, path.c_str());
        }
        return exit_ok;
    }

    int cmd_subtract(const Globals &g, const std::vector<std::string> &inputs, const std::string &profile_path)
    {
        const Tensor pt = read_tensor(profile_path);
        if (!(pt.flags & tensor_flag_static))
            throw std::invalid_argument("'" + profile_path + "' is not a static profile.");
        StaticProfile profile;
        profile.spectrum = tensor_to_spectrum(pt);
        fs::create_directories(g.out);
        for (const auto &in : inputs)
        {
            const Tensor live = read_tensor(in);
            const AoaSpectrum resid = subtract_static(tensor_to_spectrum(live), profile);
            write_tensor(spectrum_to_tensor(resid, false, live.window_start_time_s),
                         (fs::path(g.out) / fs::path(in).filename()).string());
        }
        return exit_ok;
    }

    // Each input directory holds one receiver's spectrum tensors in file-name order
    int cmd_fuse(const Globals &g, const std::vector<std::string> &dirs, int packets)
    {
        if (packets < 1)
            throw std::invalid_argument("--packets must be positive.");
        std::map<int, std::vector<std::pair<AoaSpectrum, double>>> per_rx;
        std::size_t available = SIZE_MAX;
        for (std::size_t i = 0; i < dirs.size(); ++i)
        {
            auto &list = per_rx[int(i)];
            for (const auto &f : sorted_files(dirs[i], ".gps"))
            {
                const Tensor t = read_tensor(f);
                list.emplace_back(tensor_to_spectrum(t, int(i)), t.window_start_time_s);
            }
            available = std::min(available, list.size());
        }
        fs::create_directories(g.out);
        std::size_t written = 0;
        for (std::size_t start = 0; start + std::size_t(packets) <= available; start += std::size_t(packets), ++written)
        {
            std::map<int, std::vector<AoaSpectrum>> window;
            for (const auto &[rx, list] : per_rx)
                for (std::size_t k = start; k < start + std::size_t(packets); ++k)
                    window[rx].push_back(list[k].first);
            write_tensor(fuse_window(window, per_rx.begin()->second[start].second), numbered(g.out, "window", written));
        }
        std::printf("wrote %zu fused tensors to %s\n", written, g.out.c_str());
        return exit_ok;
    }

    int cmd_pipeline(const Globals &g)
    {
        const Manifest m = run_pipeline(load_config(g), g.out, g.threads);
        std::printf("wrote %zu tensors and manifest.json to %s\n", m.windows.size(), g.out.c_str());
        return exit_ok;
    }

    int cmd_ablate(const Globals &g, const std::string &axis, const std::vector<int> &levels, int scenes, double snr_db)
    {
        AblationOptions opt;
        opt.scenes = scenes;
        opt.snr_db = snr_db;
        opt.threads = g.threads;
        if (g.seed)
            opt.seed = *g.seed;
        const auto rows = ablate(parse_ablation_axis(axis), levels, opt);
        std::string table = "level,mean_angular_error_deg,mean_position_error_m,scenes\n";
        for (const auto &r : rows)
        {
            char line[160];
            std::snprintf(line, sizeof line, "%d,%.6f,%.6f,%d\n", r.level, r.mean_angular_error_deg, r.mean_position_error_m,
                          r.scenes);
            table += line;
        }
        std::fputs(table.c_str(), stdout);
        if (g.out != ".")
        {
            fs::create_directories(g.out);
            std::ofstream((fs::path(g.out) / ("ablation_" + axis + ".csv")).string()) << table;
        }
        return exit_ok;
    }

    int cmd_eval(const Globals &g, const std::string &pred_path, const std::string &truth_path)
    {
        const auto pred = read_labels(pred_path);
        const auto truth = read_labels(truth_path);
        if (pred.size() != truth.size())
            throw std::invalid_argument("prediction and ground-truth files have different frame counts (" +
                                        std::to_string(pred.size()) + " vs " + std::to_string(truth.size()) + ").");
        std::vector<JointErrors> errors;
        for (std::size_t i = 0; i < pred.size(); ++i)
            errors.push_back(joint_error(pred[i], truth[i]));
        const ErrorSummary s = summarize_errors(errors);
        if (g.out != ".")
        {
            fs::create_directories(g.out);
            write_error_summary(s, (fs::path(g.out) / "error_summary.txt").string());
        }
        std::fputs(format_error_summary(s).c_str(), stdout);
        return exit_ok;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Joint angle-of-arrival spectra from WiFi CSI"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    std::uint64_t seed = 0;
    auto *seed_opt = app.add_option("--seed", seed, "Override the scenario or ablation seed");
    app.add_option("--config", g.config, "Scenario JSON");
    app.add_option("--out", g.out, "Output directory")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

    std::vector<std::string> inputs;
    std::string input, profile, pred, truth, axis;
    EstimatorFlags est_flags;
    bool per_chain = false, median = false;
    int fuse_packets = 100, scenes = 50;
    double snr_db = 20.0;
    std::vector<int> levels;

    auto *synth = app.add_subcommand("synth", "Synthesize CSI traces and skeleton labels from a scenario");
    auto *calibrate = app.add_subcommand("calibrate", "Remove the linear delay phase from trace files");
    calibrate->add_option("inputs", inputs, "Trace files")->required()->check(CLI::ExistingFile);
    calibrate->add_flag("--per-chain-offset", per_chain, "Fit a separate offset per antenna chain");
    auto *spectrum = app.add_subcommand("spectrum", "Estimate 2D spectra over windows of a trace");
    spectrum->add_option("input", input, "Trace file")->required()->check(CLI::ExistingFile);
    est_flags.add(spectrum);
    auto *rebaseline = app.add_subcommand("rebaseline", "Build static profiles from empty-scene traces");
    rebaseline->add_option("inputs", inputs, "Trace files")->required()->check(CLI::ExistingFile);
    rebaseline->add_flag("--median", median, "Median instead of mean across windows");
    est_flags.add(rebaseline);
    auto *subtract = app.add_subcommand("subtract", "Subtract a static profile from spectrum tensors");
    subtract->add_option("inputs", inputs, "Spectrum tensors")->required()->check(CLI::ExistingFile);
    subtract->add_option("--profile", profile, "Static profile tensor")->required()->check(CLI::ExistingFile);
    auto *fuse = app.add_subcommand("fuse", "Stack per-receiver spectra into fused window tensors");
    fuse->add_option("inputs", inputs, "One spectrum directory per receiver, in receiver order")->required();
    fuse->add_option("--packets", fuse_packets, "Spectra per receiver in each window")->capture_default_str();
    auto *pipeline = app.add_subcommand("pipeline", "Run synthesis through fusion for a scenario");
    auto *ablate_cmd = app.add_subcommand("ablate", "Mean estimation error across diversity levels");
    ablate_cmd->add_option("--axis", axis, "receivers | subcarriers | tx_antennas | aoa_dim")->required();
    ablate_cmd->add_option("--levels", levels, "Levels to evaluate")->required()->delimiter(',');
    ablate_cmd->add_option("--scenes", scenes, "Benchmark scenes")->capture_default_str();
    ablate_cmd->add_option("--snr-db", snr_db, "Noise level")->capture_default_str();
    auto *eval = app.add_subcommand("eval", "Per-joint error summary of predicted against true labels");
    eval->add_option("--pred", pred, "Predicted label file")->required()->check(CLI::ExistingFile);
    eval->add_option("--truth", truth, "Ground-truth label file")->required()->check(CLI::ExistingFile);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_config;
    }
    if (seed_opt->count() > 0)
        g.seed = seed;

    try
    {
        if (synth->parsed())
            return cmd_synth(g);
        if (calibrate->parsed())
            return cmd_calibrate(g, inputs, per_chain);
        if (spectrum->parsed())
            return cmd_spectrum(g, input, est_flags);
        if (rebaseline->parsed())
            return cmd_rebaseline(g, inputs, est_flags, median);
        if (subtract->parsed())
            return cmd_subtract(g, inputs, profile);
        if (fuse->parsed())
            return cmd_fuse(g, inputs, fuse_packets);
        if (pipeline->parsed())
            return cmd_pipeline(g);
        if (ablate_cmd->parsed())
            return cmd_ablate(g, axis, levels, scenes, snr_db);
        if (eval->parsed())
            return cmd_eval(g, pred, truth);
    }
    catch (const PipelineError &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return exit_config;
}
