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

#ifndef CSIAOA_BINARY_IO_HPP
#define CSIAOA_BINARY_IO_HPP

#include "errors.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace csiaoa::io
{
    // Little-endian byte sink
    class Writer
    {
    public:
        void bytes(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
        void u32(std::uint32_t x) { put(x); }
        void u64(std::uint64_t x) { put(x); }
        void f32(float x) { put(std::bit_cast<std::uint32_t>(x)); }
        void f64(double x) { put(std::bit_cast<std::uint64_t>(x)); }

        const std::vector<char> &data() const { return buf_; }

        void save(const std::string &path) const
        {
            std::ofstream f(path, std::ios::binary | std::ios::trunc);
            if (!f)
                throw std::runtime_error("cannot open '" + path + "' for writing.");
            f.write(buf_.data(), std::streamsize(buf_.size()));
            if (!f)
                throw std::runtime_error("write to '" + path + "' failed.");
        }

    private:
        template <class U>
        void put(U x)
        {
            for (std::size_t i = 0; i < sizeof(U); ++i)
                buf_.push_back(char((x >> (8 * i)) & 0xFF));
        }
        std::vector<char> buf_;
    };

    // Little-endian byte source; running past the end raises format_error with the offset
    class Reader
    {
    public:
        explicit Reader(std::vector<char> data) : buf_(std::move(data)) {}

        static Reader from_file(const std::string &path)
        {
            std::ifstream f(path, std::ios::binary);
            if (!f)
                throw format_error("cannot open '" + path + "'", 0);
            return Reader(std::vector<char>(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()));
        }

        std::uint64_t offset() const { return pos_; }
        std::uint64_t remaining() const { return buf_.size() - pos_; }

        void expect_magic(std::string_view magic)
        {
            need(magic.size(), "magic");
            if (std::memcmp(buf_.data() + pos_, magic.data(), magic.size()) != 0)
                throw format_error("bad magic, expected '" + std::string(magic) + "'", pos_);
            pos_ += magic.size();
        }
        std::uint32_t u32(const char *what) { return get<std::uint32_t>(what); }
        std::uint64_t u64(const char *what) { return get<std::uint64_t>(what); }
        float f32(const char *what) { return std::bit_cast<float>(get<std::uint32_t>(what)); }
        double f64(const char *what) { return std::bit_cast<double>(get<std::uint64_t>(what)); }

        void need(std::uint64_t n, const char *what) const
        {
            if (remaining() < n)
                throw format_error(std::string("truncated input while reading ") + what, pos_);
        }

    private:
        template <class U>
        U get(const char *what)
        {
            need(sizeof(U), what);
            U x = 0;
            for (std::size_t i = 0; i < sizeof(U); ++i)
                x |= U(static_cast<unsigned char>(buf_[pos_ + i])) << (8 * i);
            pos_ += sizeof(U);
            return x;
        }
        std::vector<char> buf_;
        std::uint64_t pos_ = 0;
    };

    inline std::uint64_t fnv1a64(const char *data, std::size_t n)
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (std::size_t i = 0; i < n; ++i)
        {
            h ^= static_cast<unsigned char>(data[i]);
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    inline std::uint64_t fnv1a64_file(const std::string &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot open '" + path + "' for hashing.");
        const std::vector<char> bytes{std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
        return fnv1a64(bytes.data(), bytes.size());
    }
}

#endif
