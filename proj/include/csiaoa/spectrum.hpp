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

#ifndef CSIAOA_SPECTRUM_HPP
#define CSIAOA_SPECTRUM_HPP

#include "calibration.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "parallel.hpp"
#include "steering.hpp"
#include "synthesizer.hpp"

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace csiaoa
{
    struct CovarianceEstimate
    {
        Eigen::MatrixXcd matrix;
        int snapshot_count = 0;
        int smoothing_window = 0;
        double diagonal_loading = 0.0;
    };

    // Subcarrier-smoothed covariance. Each packet contributes V - V_s + 1 snapshots,
    // flattened in steering order (s, r, v).
    inline CovarianceEstimate smoothed_covariance(const std::vector<CsiPacket> &packets, int vs, double diagonal_loading = 0.0)
    {
        if (packets.empty())
            throw std::invalid_argument("smoothed_covariance: no packets.");
        const int R = packets.front().num_rx, S = packets.front().num_tx, V = packets.front().num_sc;
        if (vs < 1 || vs > V)
            throw std::invalid_argument("smoothed_covariance: smoothing window must be in [1, V].");
        if (!(diagonal_loading >= 0.0))
            throw std::invalid_argument("smoothed_covariance: diagonal loading must be non-negative.");
        for (const auto &p : packets)
            if (p.num_rx != R || p.num_tx != S || p.num_sc != V)
                throw std::invalid_argument("smoothed_covariance: packets have inconsistent dimensions.");

        const int D = R * S * vs;
        const int per_packet = V - vs + 1;
        const int n = int(packets.size()) * per_packet;
        Eigen::MatrixXcd X(D, n);
        int col = 0;
        for (const auto &p : packets)
            for (int w = 0; w < per_packet; ++w, ++col)
                for (int s = 0; s < S; ++s)
                    for (int r = 0; r < R; ++r)
                        for (int v = 0; v < vs; ++v)
                            X((s * R + r) * vs + v, col) = p(r, s, w + v);

        CovarianceEstimate est;
        est.matrix = (X * X.adjoint()) / double(n);
        est.matrix = (0.5 * (est.matrix + est.matrix.adjoint())).eval();
        if (diagonal_loading > 0.0)
        {
            const double level = diagonal_loading * est.matrix.trace().real() / double(D);
            est.matrix.diagonal().array() += level;
        }
        est.snapshot_count = n;
        est.smoothing_window = vs;
        est.diagonal_loading = diagonal_loading;
        return est;
    }

    struct ModelOrderRule
    {
        double ratio_threshold = 0.01;
        std::optional<int> fixed_order; // overrides the ratio rule
    };

    struct NoiseSubspace
    {
        Eigen::MatrixXcd basis; // D x (D - signal_dim), orthonormal columns
        int signal_dim = 0;
        Eigen::VectorXd eigenvalues; // ascending; empty when built from an explicit basis

        int dim() const { return int(basis.rows()); }

        static NoiseSubspace from_basis(const Eigen::MatrixXcd &basis)
        {
            if (basis.cols() < 1 || basis.rows() < 2 || basis.cols() >= basis.rows())
                throw std::invalid_argument("NoiseSubspace: basis must be D x N with 1 <= N <= D-1.");
            const Eigen::MatrixXcd gram = basis.adjoint() * basis;
            if ((gram - Eigen::MatrixXcd::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff() > 1e-9)
                throw std::invalid_argument("NoiseSubspace: basis columns are not orthonormal.");
            NoiseSubspace ns;
            ns.basis = basis;
            ns.signal_dim = int(basis.rows() - basis.cols());
            return ns;
        }
    };

    // Eigen-split of the covariance. The signal dimension counts eigenvalues above
    // ratio * lambda_max, clamped to [1, D-1]; a spectrum with no eigenvalue below the
    // threshold (for example a scaled identity) has no noise floor and maps to 1.
    inline NoiseSubspace noise_subspace(const CovarianceEstimate &cov, const ModelOrderRule &rule = {})
    {
        const Eigen::Index D = cov.matrix.rows();
        if (D < 2 || cov.matrix.cols() != D)
            throw std::invalid_argument("noise_subspace: covariance must be square with D >= 2.");
        if (!cov.matrix.allFinite())
            throw numeric_error("noise_subspace: covariance has non-finite entries.");

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cov.matrix);
        if (es.info() != Eigen::Success)
            throw numeric_error("noise_subspace: eigendecomposition did not converge.");

        const Eigen::VectorXd &lambda = es.eigenvalues();
        int k;
        if (rule.fixed_order)
            k = *rule.fixed_order;
        else
        {
            const double cut = rule.ratio_threshold * lambda[D - 1];
            k = 0;
            for (Eigen::Index i = 0; i < D; ++i)
                if (lambda[i] > cut)
                    ++k;
            if (k == int(D))
                k = 1;
        }
        k = std::clamp(k, 1, int(D) - 1);

        NoiseSubspace ns;
        ns.signal_dim = k;
        ns.basis = es.eigenvectors().leftCols(D - k);
        ns.eigenvalues = lambda;
        return ns;
    }

    struct Spectrum4D
    {
        ParamGrid grid;
        std::vector<double> values; // (az, el, aod, tof), tof fastest

        std::size_t index(int a, int e, int o, int t) const
        {
            return ((std::size_t(a) * std::size_t(grid.elevation_deg.count) + std::size_t(e)) * std::size_t(grid.aod_deg.count) +
                    std::size_t(o)) *
                       std::size_t(grid.tof_s.count) +
                   std::size_t(t);
        }
        double operator()(int a, int e, int o, int t) const { return values[index(a, e, o, t)]; }
    };

    struct AoaSpectrum
    {
        ParamGrid grid;
        std::vector<double> values; // (az, el), el fastest
        int rx_id = 0;
        int packet_index = 0;

        int num_az() const { return grid.azimuth_deg.count; }
        int num_el() const { return grid.elevation_deg.count; }
        double &operator()(int a, int e) { return values[std::size_t(a) * std::size_t(num_el()) + std::size_t(e)]; }
        double operator()(int a, int e) const { return values[std::size_t(a) * std::size_t(num_el()) + std::size_t(e)]; }

        // First maximum in (az, el) order
        std::array<int, 2> argmax() const
        {
            const auto it = std::max_element(values.begin(), values.end());
            const auto i = std::size_t(it - values.begin());
            return {int(i / std::size_t(num_el())), int(i % std::size_t(num_el()))};
        }
        double max() const { return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()); }
    };

    namespace detail
    {
        inline void check_grid(const ParamGrid &grid)
        {
            for (const auto *a : {&grid.azimuth_deg, &grid.elevation_deg, &grid.aod_deg, &grid.tof_s})
                if (a->count < 1 || !(a->step > 0.0))
                    throw std::invalid_argument("spectrum: grid axes need count >= 1 and step > 0.");
        }

        // Precomputed contraction of the noise projector with the Kronecker steering factors.
        //   P = E_N E_N^H
        //   M_t = (I (x) w_t)^H P (I (x) w_t)        (SR x SR), w_t = ToF steering
        // For a cell (phi, theta): Q_t = (I_S (x) Phi)^H M_t (I_S (x) Phi)   (S x S)
        // and a^H P a = gamma^H Q_t gamma, evaluated for every AoD.
        class MusicKernel
        {
        public:
            MusicKernel(const NoiseSubspace &ns, const ParamGrid &grid, const JointArray &arr)
                : grid_(grid), R_(arr.num_rx()), S_(arr.num_tx()), vs_(arr.vs), SR_(R_ * S_)
            {
                check_grid(grid);
                const int D = arr.dim();
                if (ns.basis.rows() != D)
                    throw std::invalid_argument("spectrum: noise subspace dimension " + std::to_string(ns.basis.rows()) +
                                                " does not match the array (" + std::to_string(D) + ").");
                if (ns.basis.cols() < 1)
                    throw std::invalid_argument("spectrum: empty noise subspace.");
                floor_ = 1e-15 * double(D);

                const Eigen::MatrixXcd P = ns.basis * ns.basis.adjoint();
                const int T = grid.tof_s.count;
                M_.assign(std::size_t(T) * std::size_t(SR_) * std::size_t(SR_), cd(0.0, 0.0));
                Eigen::MatrixXcd Y(D, SR_);
                for (int t = 0; t < T; ++t)
                {
                    const Eigen::VectorXcd w = steering_tof(grid.tof_s.at(t), arr.config, vs_);
                    for (int j = 0; j < SR_; ++j)
                        Y.col(j) = P.middleCols(j * vs_, vs_) * w;
                    cd *M = &M_[std::size_t(t) * std::size_t(SR_) * std::size_t(SR_)];
                    for (int i = 0; i < SR_; ++i)
                        for (int j = 0; j < SR_; ++j)
                            M[i * SR_ + j] = w.dot(Y.col(j).segment(i * vs_, vs_)); // dot conjugates w
                }

                const int O = grid.aod_deg.count;
                gamma_.resize(std::size_t(O) * std::size_t(S_));
                for (int o = 0; o < O; ++o)
                {
                    const Eigen::VectorXcd g = steering_tx(grid.aod_deg.at(o), arr.tx, arr.config);
                    for (int s = 0; s < S_; ++s)
                        gamma_[std::size_t(o) * std::size_t(S_) + std::size_t(s)] = g[s];
                }
                rx_ = arr.rx;
                config_ = arr.config;
            }

            double floor() const { return floor_; }

            // Denominators a^H P a for every (aod, tof) at one (az, el) cell, aod-major
            void cell(int a, int e, std::vector<double> &out) const
            {
                const int T = grid_.tof_s.count, O = grid_.aod_deg.count;
                out.resize(std::size_t(O) * std::size_t(T));
                const Eigen::VectorXcd phi = steering_2d(grid_.azimuth_deg.at(a), grid_.elevation_deg.at(e), rx_, config_);

                std::vector<cd> Z(std::size_t(SR_) * std::size_t(S_));
                std::vector<cd> Q(std::size_t(S_) * std::size_t(S_));
                for (int t = 0; t < T; ++t)
                {
                    const cd *M = &M_[std::size_t(t) * std::size_t(SR_) * std::size_t(SR_)];
                    for (int i = 0; i < SR_; ++i)
                        for (int s2 = 0; s2 < S_; ++s2)
                        {
                            cd acc = 0.0;
                            for (int r2 = 0; r2 < R_; ++r2)
                                acc += M[i * SR_ + s2 * R_ + r2] * phi[r2];
                            Z[std::size_t(i) * std::size_t(S_) + std::size_t(s2)] = acc;
                        }
                    for (int s = 0; s < S_; ++s)
                        for (int s2 = s; s2 < S_; ++s2)
                        {
                            cd acc = 0.0;
                            for (int r = 0; r < R_; ++r)
                                acc += std::conj(phi[r]) * Z[std::size_t(s * R_ + r) * std::size_t(S_) + std::size_t(s2)];
                            Q[std::size_t(s) * std::size_t(S_) + std::size_t(s2)] = acc;
                        }
                    double diag = 0.0;
                    for (int s = 0; s < S_; ++s)
                        diag += Q[std::size_t(s) * std::size_t(S_) + std::size_t(s)].real();
                    for (int o = 0; o < O; ++o)
                    {
                        const cd *g = &gamma_[std::size_t(o) * std::size_t(S_)];
                        cd off = 0.0;
                        for (int s = 0; s < S_; ++s)
                            for (int s2 = s + 1; s2 < S_; ++s2)
                                off += std::conj(g[s]) * g[s2] * Q[std::size_t(s) * std::size_t(S_) + std::size_t(s2)];
                        out[std::size_t(o) * std::size_t(T) + std::size_t(t)] = diag + 2.0 * off.real();
                    }
                }
            }

            double value(double denom) const { return 1.0 / std::max(denom, floor_); }

        private:
            ParamGrid grid_;
            int R_, S_, vs_, SR_;
            double floor_ = 0.0;
            std::vector<cd> M_;
            std::vector<cd> gamma_;
            ArrayGeometry rx_;
            ChannelConfig config_;
        };
    }

    // P(phi, theta, omega, tau) = 1 / (a^H E_N E_N^H a) over the full grid.
    // Rows of azimuth are distributed over threads; every cell is computed by the same
    // code path, so the result does not depend on the thread count.
    inline Spectrum4D music_spectrum_4d(const NoiseSubspace &ns, const ParamGrid &grid, const JointArray &arr, int threads = 1)
    {
        const detail::MusicKernel kernel(ns, grid, arr);
        Spectrum4D spec;
        spec.grid = grid;
        spec.values.resize(grid.size4d());
        const int E = grid.elevation_deg.count;
        const std::size_t cell_size = std::size_t(grid.aod_deg.count) * std::size_t(grid.tof_s.count);
        parallel_for(grid.azimuth_deg.count, threads, [&](int a)
                     {
            std::vector<double> den;
            for (int e = 0; e < E; ++e)
            {
                kernel.cell(a, e, den);
                double *dst = &spec.values[spec.index(a, e, 0, 0)];
                for (std::size_t i = 0; i < cell_size; ++i)
                    dst[i] = kernel.value(den[i]);
            } });
        return spec;
    }

    // Sum over AoD and ToF, AoD outer, ToF inner
    inline AoaSpectrum marginalize_to_2d(const Spectrum4D &spec)
    {
        const auto &g = spec.grid;
        if (spec.values.size() != g.size4d())
            throw std::invalid_argument("marginalize_to_2d: value count does not match the grid.");
        AoaSpectrum out;
        out.grid = g;
        out.values.assign(std::size_t(g.azimuth_deg.count) * std::size_t(g.elevation_deg.count), 0.0);
        const std::size_t cell_size = std::size_t(g.aod_deg.count) * std::size_t(g.tof_s.count);
        for (std::size_t c = 0; c < out.values.size(); ++c)
        {
            double acc = 0.0;
            const double *src = &spec.values[c * cell_size];
            for (std::size_t i = 0; i < cell_size; ++i)
                acc += src[i];
            out.values[c] = acc;
        }
        return out;
    }

    // Marginalized 2D spectrum without storing the 4D array; bit-identical to
    // marginalize_to_2d(music_spectrum_4d(...)).
    inline AoaSpectrum music_spectrum_2d(const NoiseSubspace &ns, const ParamGrid &grid, const JointArray &arr, int threads = 1)
    {
        const detail::MusicKernel kernel(ns, grid, arr);
        AoaSpectrum out;
        out.grid = grid;
        out.values.assign(std::size_t(grid.azimuth_deg.count) * std::size_t(grid.elevation_deg.count), 0.0);
        const int E = grid.elevation_deg.count;
        parallel_for(grid.azimuth_deg.count, threads, [&](int a)
                     {
            std::vector<double> den;
            for (int e = 0; e < E; ++e)
            {
                kernel.cell(a, e, den);
                double acc = 0.0;
                for (double d : den)
                    acc += kernel.value(d);
                out(a, e) = acc;
            } });
        return out;
    }

    // AoD x ToF slice of the 4D spectrum at one (az, el) cell, ToF fastest
    inline std::vector<double> cell_spectrum(const NoiseSubspace &ns, const ParamGrid &grid, const JointArray &arr, int a, int e)
    {
        if (a < 0 || a >= grid.azimuth_deg.count || e < 0 || e >= grid.elevation_deg.count)
            throw std::invalid_argument("cell_spectrum: cell outside the grid.");
        const detail::MusicKernel kernel(ns, grid, arr);
        std::vector<double> den;
        kernel.cell(a, e, den);
        for (auto &d : den)
            d = kernel.value(d);
        return den;
    }

    struct Spectrum1D
    {
        GridAxis grid;
        std::vector<double> values;
    };

    // Classic MUSIC over a linear receive sub-array. `rows` selects receive antennas; the
    // sub-array geometry gives their positions along the array axis. Transmit antennas and
    // subcarriers only provide snapshots.
    inline Spectrum1D music_spectrum_1d(const std::vector<CsiPacket> &packets, const GridAxis &grid_deg,
                                        const ArrayGeometry &geometry, const ChannelConfig &config,
                                        const std::vector<int> &rows, const ModelOrderRule &rule = {})
    {
        if (packets.empty())
            throw std::invalid_argument("music_spectrum_1d: no packets.");
        if (rows.size() < 2 || geometry.size() != rows.size())
            throw std::invalid_argument("music_spectrum_1d: need >= 2 rows matching the geometry.");
        if (grid_deg.count < 1 || !(grid_deg.step > 0.0))
            throw std::invalid_argument("music_spectrum_1d: invalid grid.");
        const int M = int(rows.size());
        for (int r : rows)
            if (r < 0 || r >= packets.front().num_rx)
                throw std::invalid_argument("music_spectrum_1d: row index out of range.");

        Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(M, M);
        int n = 0;
        Eigen::VectorXcd x(M);
        for (const auto &p : packets)
            for (int s = 0; s < p.num_tx; ++s)
                for (int v = 0; v < p.num_sc; ++v, ++n)
                {
                    for (int m = 0; m < M; ++m)
                        x[m] = p(rows[std::size_t(m)], s, v);
                    C += x * x.adjoint();
                }
        CovarianceEstimate cov;
        cov.matrix = C / double(n);
        cov.matrix = (0.5 * (cov.matrix + cov.matrix.adjoint())).eval();
        cov.snapshot_count = n;
        cov.smoothing_window = 1;
        const NoiseSubspace ns = noise_subspace(cov, rule);

        Spectrum1D out{grid_deg, std::vector<double>(std::size_t(grid_deg.count))};
        for (int i = 0; i < grid_deg.count; ++i)
        {
            const Eigen::VectorXcd a = steering_1d(grid_deg.at(i), geometry, config);
            const double den = (ns.basis.adjoint() * a).squaredNorm();
            out.values[std::size_t(i)] = 1.0 / std::max(den, 1e-15 * double(M));
        }
        return out;
    }

    struct Peak
    {
        int az_index = 0, el_index = 0;
        double azimuth_deg = 0.0, elevation_deg = 0.0;
        double power = 0.0;
    };

    // Strict local maxima over the 8-neighborhood, at least min_prominence_ratio * global
    // max, strongest first. Elevation e and 180 - e steer identically, so a maximum above
    // 90 degrees whose mirror cell is on the grid is reported only once, at the mirror.
    inline std::vector<Peak> detect_peaks(const AoaSpectrum &spec, int max_peaks = 8, double min_prominence_ratio = 0.1)
    {
        std::vector<Peak> peaks;
        if (max_peaks < 1 || spec.values.empty())
            return peaks;
        const int A = spec.num_az(), E = spec.num_el();
        const double gmax = spec.max();
        const double threshold = min_prominence_ratio * gmax;
        const auto &eg = spec.grid.elevation_deg;
        for (int a = 0; a < A; ++a)
            for (int e = 0; e < E; ++e)
            {
                const double v = spec(a, e);
                if (!(v > 0.0) || v < threshold)
                    continue;
                bool is_max = true;
                for (int da = -1; da <= 1 && is_max; ++da)
                    for (int de = -1; de <= 1; ++de)
                    {
                        if (da == 0 && de == 0)
                            continue;
                        const int aa = a + da, ee = e + de;
                        if (aa < 0 || aa >= A || ee < 0 || ee >= E)
                            continue;
                        if (!(v > spec(aa, ee)))
                        {
                            is_max = false;
                            break;
                        }
                    }
                if (!is_max)
                    continue;
                const double el = eg.at(e);
                if (el > 90.0)
                {
                    const double mirror = (180.0 - el - eg.start) / eg.step;
                    const double idx = std::round(mirror);
                    if (std::abs(mirror - idx) < 1e-9 && idx >= 0.0 && idx < double(E))
                        continue;
                }
                peaks.push_back({a, e, spec.grid.azimuth_deg.at(a), el, v});
            }
        std::stable_sort(peaks.begin(), peaks.end(), [](const Peak &x, const Peak &y)
                         { return x.power > y.power; });
        if (int(peaks.size()) > max_peaks)
            peaks.resize(std::size_t(max_peaks));
        return peaks;
    }

    struct Peak1D
    {
        int index = 0;
        double angle_deg = 0.0;
        double power = 0.0;
    };

    inline std::vector<Peak1D> detect_peaks_1d(const Spectrum1D &spec, int max_peaks = 8, double min_prominence_ratio = 0.1)
    {
        std::vector<Peak1D> peaks;
        const int n = int(spec.values.size());
        if (max_peaks < 1 || n == 0)
            return peaks;
        const double threshold = min_prominence_ratio * *std::max_element(spec.values.begin(), spec.values.end());
        for (int i = 0; i < n; ++i)
        {
            const double v = spec.values[std::size_t(i)];
            if (!(v > 0.0) || v < threshold)
                continue;
            const bool left = i == 0 || v > spec.values[std::size_t(i - 1)];
            const bool right = i == n - 1 || v > spec.values[std::size_t(i + 1)];
            if (left && right && n > 1)
                peaks.push_back({i, spec.grid.at(i), v});
        }
        std::stable_sort(peaks.begin(), peaks.end(), [](const Peak1D &x, const Peak1D &y)
                         { return x.power > y.power; });
        if (int(peaks.size()) > max_peaks)
            peaks.resize(std::size_t(max_peaks));
        return peaks;
    }

    struct EstimatorConfig
    {
        int vs = 20;
        int packets_per_window = 10;
        double diagonal_loading = 0.0;
        ModelOrderRule rule;
        ParamGrid grid;
        bool calibrate = true;
        CalibrationOptions calibration;
        int threads = 1;
    };

    // Calibrate (optional), smooth, split subspaces and evaluate the marginalized spectrum
    inline AoaSpectrum estimate_spectrum(const std::vector<CsiPacket> &packets, const DeviceLayout &layout,
                                         const ChannelConfig &config, const EstimatorConfig &est)
    {
        if (packets.empty())
            throw std::invalid_argument("estimate_spectrum: no packets.");
        const JointArray arr = joint_array(layout, config, est.vs);
        const CovarianceEstimate cov = est.calibrate ? smoothed_covariance(calibrate_packets(packets, est.calibration), est.vs,
                                                                           est.diagonal_loading)
                                                     : smoothed_covariance(packets, est.vs, est.diagonal_loading);
        AoaSpectrum out = music_spectrum_2d(noise_subspace(cov, est.rule), est.grid, arr, est.threads);
        out.rx_id = packets.front().rx_id;
        return out;
    }
}

#endif
