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

#ifndef CSIAOA_PARALLEL_HPP
#define CSIAOA_PARALLEL_HPP

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace csiaoa
{
    // Runs body(i) for i in [0, n) over contiguous chunks on up to `threads` workers.
    // Each index is processed exactly once by the same code, so results that are written
    // per index are identical for any thread count. The first exception is rethrown.
    template <class Body>
    void parallel_for(int n, int threads, Body &&body)
    {
        if (n <= 0)
            return;
        const int workers = std::clamp(threads, 1, n);
        if (workers == 1)
        {
            for (int i = 0; i < n; ++i)
                body(i);
            return;
        }

        std::exception_ptr error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        pool.reserve(std::size_t(workers));
        for (int w = 0; w < workers; ++w)
        {
            const int begin = int(std::int64_t(n) * w / workers);
            const int end = int(std::int64_t(n) * (w + 1) / workers);
            pool.emplace_back([&, begin, end]()
                              {
                try
                {
                    for (int i = begin; i < end; ++i)
                        body(i);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                } });
        }
        for (auto &t : pool)
            t.join();
        if (error)
            std::rethrow_exception(error);
    }
}

#endif
