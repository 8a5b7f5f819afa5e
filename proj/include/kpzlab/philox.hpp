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
#include <numbers>

namespace kpzlab {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Output is a
// pure function of (counter, key).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

inline PhiloxCounter philox4x32_10(PhiloxCounter c, PhiloxKey k) noexcept
{
    constexpr std::uint64_t m0 = 0xD2511F53u;
    constexpr std::uint64_t m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u;
    constexpr std::uint32_t w1 = 0xBB67AE85u;
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            k[0] += w0;
            k[1] += w1;
        }
        const std::uint64_t p0 = m0 * c[0];
        const std::uint64_t p1 = m1 * c[2];
        c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
    }
    return c;
}

inline PhiloxKey philox_key(std::uint64_t seed) noexcept
{
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

// Domain tags keep independent uses of one seed apart.
enum class StreamTag : std::uint32_t {
    environment = 1,
    she_noise = 2,
    replica_seed = 3,
    trial = 4,
};

// 64-bit child seed for item `index` of a run seeded with `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index, StreamTag tag) noexcept
{
    const PhiloxCounter out = philox4x32_10(
        {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0u, static_cast<std::uint32_t>(tag)},
        philox_key(seed));
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

// uniform in the open interval (0, 1) from 53 random bits
inline double open_unit(std::uint64_t bits) noexcept
{
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Sequence of variates attached to one fixed prefix (a, b, tag) of the
// counter; the third word counts blocks.
class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint32_t a, std::uint32_t b, StreamTag tag) noexcept
        : key_(philox_key(seed)), a_(a), b_(b), tag_(static_cast<std::uint32_t>(tag))
    {
    }

    std::uint64_t next_u64() noexcept
    {
        if (pos_ == 2) refill();
        const std::uint64_t r = (static_cast<std::uint64_t>(buf_[2 * pos_ + 1]) << 32) | buf_[2 * pos_];
        ++pos_;
        return r;
    }

    double uniform() noexcept { return open_unit(next_u64()); }

    double normal() noexcept
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double th = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    // Marsaglia-Tsang squeeze, shape >= 1.
    double gamma(double shape) noexcept
    {
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x;
            double v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

private:
    void refill() noexcept
    {
        buf_ = philox4x32_10({a_, b_, block_++, tag_}, key_);
        pos_ = 0;
    }

    PhiloxKey key_;
    std::uint32_t a_;
    std::uint32_t b_;
    std::uint32_t tag_;
    std::uint32_t block_ = 0;
    PhiloxCounter buf_{};
    int pos_ = 2;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace kpzlab
