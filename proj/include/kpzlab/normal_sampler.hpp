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

#include <array>
#include <cmath>
#include <cstdint>

#include "kpzlab/philox.hpp"

namespace kpzlab {

// xoshiro256++ (Blackman and Vigna). Used where one long sequential stream per
// task is wanted; the state is seeded from a counter-based draw so each task
// stream is still a pure function of (seed, task index).
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed, std::uint64_t stream, StreamTag tag) noexcept
    {
        const PhiloxCounter a = philox4x32_10({static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0u, static_cast<std::uint32_t>(tag)}, philox_key(seed));
        const PhiloxCounter b = philox4x32_10({static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 1u, static_cast<std::uint32_t>(tag)}, philox_key(seed));
        s_[0] = (static_cast<std::uint64_t>(a[1]) << 32) | a[0];
        s_[1] = (static_cast<std::uint64_t>(a[3]) << 32) | a[2];
        s_[2] = (static_cast<std::uint64_t>(b[1]) << 32) | b[0];
        s_[3] = (static_cast<std::uint64_t>(b[3]) << 32) | b[2];
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    std::uint64_t operator()() noexcept
    {
        const std::uint64_t r = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return r;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> s_{};
};

// 256-layer ziggurat for the standard normal (Marsaglia and Tsang, 2000).
// Layer index and abscissa use disjoint bits of one 64-bit draw.
class NormalZiggurat {
public:
    static const NormalZiggurat& instance()
    {
        static const NormalZiggurat z;
        return z;
    }

    template <class G>
    double operator()(G& g) const noexcept
    {
        for (;;) {
            const std::uint64_t b = g();
            const int i = static_cast<int>(b & 255u);
            const double u = static_cast<double>(b >> 11) * 0x1.0p-52 - 1.0;
            const double z = u * x_[i];
            if (std::fabs(z) < x_[i + 1]) return z;
            if (i == 0) return tail(g, u < 0.0);
            const double y = f_[i] + open_unit(g()) * (f_[i + 1] - f_[i]);
            if (y < std::exp(-0.5 * z * z)) return z;
        }
    }

private:
    static constexpr double kR = 3.6541528853610088;
    static constexpr double kArea = 0.00492867323399;

    NormalZiggurat() noexcept
    {
        auto f = [](double z) { return std::exp(-0.5 * z * z); };
        x_[0] = kArea / f(kR);
        x_[1] = kR;
        for (int i = 1; i < 255; ++i) x_[i + 1] = std::sqrt(-2.0 * std::log(f(x_[i]) + kArea / x_[i]));
        x_[256] = 0.0;
        for (int i = 0; i < 257; ++i) f_[i] = f(x_[i]);
    }

    template <class G>
    double tail(G& g, bool negative) const noexcept
    {
        double a;
        double c;
        do {
            a = -std::log(open_unit(g())) / kR;
            c = -std::log(open_unit(g()));
        } while (2.0 * c < a * a);
        return negative ? -(kR + a) : kR + a;
    }

    std::array<double, 257> x_{};
    std::array<double, 257> f_{};
};

} // namespace kpzlab
