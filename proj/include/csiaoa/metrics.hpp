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

#ifndef CSIAOA_METRICS_HPP
#define CSIAOA_METRICS_HPP

#include "errors.hpp"
#include "synthesizer.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace csiaoa
{
    using JointErrors = std::array<double, num_joints>; // centimeters

    inline JointErrors joint_error(const SkeletonFrame &pred, const SkeletonFrame &gt)
    {
        JointErrors e{};
        for (int j = 0; j < num_joints; ++j)
            e[std::size_t(j)] = 100.0 * (pred.joints_m[std::size_t(j)] - gt.joints_m[std::size_t(j)]).norm();
        return e;
    }

    struct ErrorSummary
    {
        std::array<double, num_joints> per_joint_mean_cm{};
        std::array<double, num_joints> per_joint_median_cm{};
        double overall_mean_cm = 0.0;
        double overall_median_cm = 0.0;
        std::vector<double> cdf_samples; // ascending
    };

    namespace detail
    {
        // Median of a sorted, non-empty list
        inline double sorted_median(const std::vector<double> &v)
        {
            const std::size_t m = v.size() / 2;
            return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
        }
    }

    inline ErrorSummary summarize_errors(const std::vector<JointErrors> &frames)
    {
        if (frames.empty())
            throw std::invalid_argument("summarize_errors: no frames.");
        ErrorSummary s;
        s.cdf_samples.reserve(frames.size() * num_joints);
        for (int j = 0; j < num_joints; ++j)
        {
            std::vector<double> col;
            col.reserve(frames.size());
            double sum = 0.0;
            for (const auto &f : frames)
            {
                if (!(f[std::size_t(j)] >= 0.0))
                    throw std::invalid_argument("summarize_errors: errors must be non-negative.");
                col.push_back(f[std::size_t(j)]);
                sum += f[std::size_t(j)];
            }
            std::sort(col.begin(), col.end());
            s.per_joint_mean_cm[std::size_t(j)] = sum / double(frames.size());
            s.per_joint_median_cm[std::size_t(j)] = detail::sorted_median(col);
        }
        double total = 0.0;
        for (const auto &f : frames)
            for (double e : f)
            {
                total += e;
                s.cdf_samples.push_back(e);
            }
        std::sort(s.cdf_samples.begin(), s.cdf_samples.end());
        s.overall_mean_cm = total / double(s.cdf_samples.size());
        s.overall_median_cm = detail::sorted_median(s.cdf_samples);
        return s;
    }

    // Plain-text form:
    //   overall_mean_cm <x>
    //   overall_median_cm <x>
    //   joint <name> <mean_cm> <median_cm>     (14 lines, fixed joint order)
    //   cdf <n> <x1> ... <xn>
    inline std::string format_error_summary(const ErrorSummary &s)
    {
        std::ostringstream os;
        os.imbue(std::locale::classic());
        os << std::setprecision(17);
        os << "overall_mean_cm " << s.overall_mean_cm << '\n';
        os << "overall_median_cm " << s.overall_median_cm << '\n';
        for (int j = 0; j < num_joints; ++j)
            os << "joint " << joint_names[std::size_t(j)] << ' ' << s.per_joint_mean_cm[std::size_t(j)] << ' '
               << s.per_joint_median_cm[std::size_t(j)] << '\n';
        os << "cdf " << s.cdf_samples.size();
        for (double x : s.cdf_samples)
            os << ' ' << x;
        os << '\n';
        return os.str();
    }

    inline ErrorSummary parse_error_summary(const std::string &text)
    {
        std::istringstream in(text);
        in.imbue(std::locale::classic());
        ErrorSummary s;
        std::array<bool, num_joints> seen{};
        bool have_mean = false, have_median = false, have_cdf = false;
        std::string line;
        std::uint64_t offset = 0;
        while (std::getline(in, line))
        {
            const std::uint64_t line_at = offset;
            offset += line.size() + 1;
            if (line.empty())
                continue;
            std::istringstream ls(line);
            ls.imbue(std::locale::classic());
            std::string key;
            ls >> key;
            if (key == "overall_mean_cm")
                have_mean = bool(ls >> s.overall_mean_cm);
            else if (key == "overall_median_cm")
                have_median = bool(ls >> s.overall_median_cm);
            else if (key == "joint")
            {
                std::string name;
                double mean = 0.0, median = 0.0;
                if (!(ls >> name >> mean >> median))
                    throw format_error("malformed joint line", line_at);
                const auto it = std::find(joint_names.begin(), joint_names.end(), name);
                if (it == joint_names.end())
                    throw format_error("unknown joint '" + name + "'", line_at);
                const auto j = std::size_t(it - joint_names.begin());
                s.per_joint_mean_cm[j] = mean;
                s.per_joint_median_cm[j] = median;
                seen[j] = true;
            }
            else if (key == "cdf")
            {
                std::size_t n = 0;
                if (!(ls >> n))
                    throw format_error("malformed cdf line", line_at);
                s.cdf_samples.resize(n);
                for (auto &x : s.cdf_samples)
                    if (!(ls >> x))
                        throw format_error("cdf line shorter than its count", line_at);
                have_cdf = true;
            }
            else
                throw format_error("unknown key '" + key + "'", line_at);
        }
        if (!have_mean || !have_median || !have_cdf || std::find(seen.begin(), seen.end(), false) != seen.end())
            throw format_error("error summary is incomplete", offset);
        return s;
    }

    inline void write_error_summary(const ErrorSummary &s, const std::string &path)
    {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f)
            throw std::runtime_error("cannot open '" + path + "' for writing.");
        f << format_error_summary(s);
    }

    inline ErrorSummary read_error_summary(const std::string &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw format_error("cannot open '" + path + "'", 0);
        std::ostringstream os;
        os << f.rdbuf();
        return parse_error_summary(os.str());
    }
}

#endif
