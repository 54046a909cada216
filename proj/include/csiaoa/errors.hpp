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

#ifndef CSIAOA_ERRORS_HPP
#define CSIAOA_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace csiaoa
{
    // Invalid arguments and config errors use std::invalid_argument directly.

    // A point that cannot be expressed in an array's angle convention
    class geometry_error : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Eigendecomposition failures and other numerical breakdowns
    class numeric_error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Binary file parse error, carries the byte offset where parsing stopped
    class format_error : public std::runtime_error
    {
    public:
        format_error(const std::string &what, std::uint64_t offset)
            : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

        std::uint64_t offset() const noexcept { return offset_; }

    private:
        std::uint64_t offset_;
    };

    // Phase of a zero-magnitude CSI entry is undefined
    class undefined_phase_error : public std::domain_error
    {
    public:
        undefined_phase_error(int r, int s, int v)
            : std::domain_error("zero-magnitude CSI entry at (r=" + std::to_string(r) + ", s=" + std::to_string(s) +
                                ", v=" + std::to_string(v) + "), phase undefined"),
              r_(r), s_(s), v_(v) {}

        int r() const noexcept { return r_; }
        int s() const noexcept { return s_; }
        int v() const noexcept { return v_; }

    private:
        int r_, s_, v_;
    };
}

#endif
