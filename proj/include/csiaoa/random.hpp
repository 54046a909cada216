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

#ifndef CSIAOA_RANDOM_HPP
#define CSIAOA_RANDOM_HPP

#include <cstdint>
#include <initializer_list>

namespace csiaoa
{
    inline std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    // Independent stream seed for (base, key...), stable across runs and thread schedules
    inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys)
    {
        std::uint64_t h = splitmix64(base);
        for (auto k : keys)
            h = splitmix64(h ^ splitmix64(k + 0x632BE59BD9B4E019ULL));
        return h;
    }
}

#endif
