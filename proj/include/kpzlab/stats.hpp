/*
   Copyright 2026 The kpzlab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <vector>

namespace kpzlab {

struct SummaryStats {
    std::int64_t n = 0;
    double mean = 0.0;
    double variance = 0.0;              // unbiased; 0 when n = 1
    std::optional<double> stderr_mean;  // undefined for n = 1
    double min = 0.0;
    double max = 0.0;
};

// Welford pass in index order, so the result does not depend on how the
// samples were produced.
inline SummaryStats summarize(std::span<const double> xs)
{
    SummaryStats s;
    if (xs.empty()) return s;
    double m = 0.0;
    double m2 = 0.0;
    s.min = xs[0];
    s.max = xs[0];
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double x = xs[k];
        const double d = x - m;
        m += d / static_cast<double>(k + 1);
        m2 += d * (x - m);
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
    }
    s.n = static_cast<std::int64_t>(xs.size());
    s.mean = m;
    if (s.n > 1) {
        s.variance = std::max(0.0, m2 / static_cast<double>(s.n - 1));
        s.stderr_mean = std::sqrt(s.variance / static_cast<double>(s.n));
    }
    return s;
}

inline unsigned default_threads() noexcept
{
    const unsigned h = std::thread::hardware_concurrency();
    return h == 0 ? 1u : h;
}

// out[i] = fn(i) for i in [0, count), spread over up to `threads` workers.
// Each slot is written by exactly one task, so the result is independent of
// the worker count. The first exception thrown is rethrown.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, unsigned threads, Fn fn)
{
    std::vector<T> out(count);
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard lk(err_mu);
                if (!err) err = std::current_exception();
                failed = true;
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(count));
    pool.reserve(n);
    for (unsigned w = 0; w < n; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
    return out;
}

} // namespace kpzlab
