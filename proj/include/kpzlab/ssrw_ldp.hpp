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
#include <optional>
#include <span>

#include "kpzlab/errors.hpp"
#include "kpzlab/log_domain.hpp"
#include "kpzlab/scaling.hpp"

namespace kpzlab {

namespace detail {

// log(n!) - log(sqrt(2 pi n) (n/e)^n)
inline double stirling_error(double n) noexcept
{
    constexpr double s0 = 1.0 / 12.0;
    constexpr double s1 = 1.0 / 360.0;
    constexpr double s2 = 1.0 / 1260.0;
    constexpr double s3 = 1.0 / 1680.0;
    constexpr double s4 = 1.0 / 1188.0;
    if (n <= 15.0) {
        if (n == 0.0) return 0.0;
        return std::lgamma(n + 1.0) - (n + 0.5) * std::log(n) + n - 0.5 * std::log(2.0 * std::numbers::pi);
    }
    const double nn = n * n;
    if (n > 500.0) return (s0 - s1 / nn) / n;
    if (n > 80.0) return (s0 - (s1 - s2 / nn) / nn) / n;
    if (n > 35.0) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
    return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// x log(x / np) + np - x without cancellation near x = np.
inline double binomial_deviance(double x, double np) noexcept
{
    if (std::fabs(x - np) < 0.1 * (x + np)) {
        double v = (x - np) / (x + np);
        double s = (x - np) * v;
        double ej = 2.0 * x * v;
        v *= v;
        for (int j = 1; j < 1000; ++j) {
            ej *= v;
            const double s1 = s + ej / (2 * j + 1);
            if (s1 == s) return s1;
            s = s1;
        }
        return s;
    }
    return x * std::log(x / np) + np - x;
}

} // namespace detail

// log P(S_n = m) for the simple symmetric walk from 0; -inf off the support.
// Saddle-point form of the binomial, accurate to a few ulps in the log.
inline double ssrw_log_prob(std::int64_t n, std::int64_t m) noexcept
{
    if (n < 0 || m > n || m < -n || ((n + m) % 2) != 0) return kNegInf;
    const double ln2 = std::numbers::ln2;
    if (m == n || m == -n) return -static_cast<double>(n) * ln2;
    const double nd = static_cast<double>(n);
    const double k = static_cast<double>((n + m) / 2);
    const double half = 0.5 * nd;
    const double lc = detail::stirling_error(nd) - detail::stirling_error(k) - detail::stirling_error(nd - k)
        - detail::binomial_deviance(k, half) - detail::binomial_deviance(nd - k, half);
    const double lf = std::log(2.0 * std::numbers::pi) + std::log(k) + std::log1p(-k / nd);
    return lc - 0.5 * lf;
}

struct RatePair {
    double rate = 0.0;  // I(v)
    double slope = 0.0; // I'(v)
};

inline RatePair rate_pair(double v)
{
    detail::require(v > -1.0 && v < 1.0, "rate_pair: |v| must be < 1");
    return {0.5 * (1.0 - v) * std::log1p(-v) + 0.5 * (1.0 + v) * std::log1p(v), std::atanh(v)};
}

// Density of N(0, sigma2 t) at x.
inline double heat_kernel(double sigma2, double t, double x)
{
    detail::require(sigma2 > 0.0, "heat_kernel: sigma2 must be > 0");
    detail::require(t > 0.0, "heat_kernel: t must be > 0");
    const double s = sigma2 * t;
    return std::exp(-x * x / (2.0 * s)) / std::sqrt(2.0 * std::numbers::pi * s);
}

struct LdpQuery {
    ScalingFrame frame;
    double t = 1.0;
    double x = 0.0;
    int m1 = 0;
    int m2 = 0;
};

namespace detail {
inline void check_shift(int m1, int m2)
{
    require(m1 >= -1 && m1 <= 1 && m2 >= -1 && m2 <= 1, "shift components must lie in {-1, 0, 1}");
    require(((m1 - m2) % 2) == 0, "m1 - m2 must be even");
}
} // namespace detail

// log of (1/eps) exp(i I + (j - v i) I') P(S_{i+m1} = j+m2) at a lattice point.
inline double log_rescaled_ssrw_at(const ScalingFrame& f, LatticePoint p, int m1 = 0, int m2 = 0)
{
    detail::check_shift(m1, m2);
    const double lp = ssrw_log_prob(p.i + m1, p.j + m2);
    if (lp == kNegInf) return kNegInf;
    const RatePair r = rate_pair(f.v());
    const double drift = static_cast<double>(p.j) - f.v() * static_cast<double>(p.i);
    return -std::log(f.eps()) + static_cast<double>(p.i) * r.rate + drift * r.slope + lp;
}

inline double rescaled_ssrw(const LdpQuery& q)
{
    detail::require(q.t > 0.0, "rescaled_ssrw: t must be > 0");
    const SnappedPoint s = snap(q.frame, q.t, q.x);
    return std::exp(log_rescaled_ssrw_at(q.frame, s.point, q.m1, q.m2));
}

inline double ldp_limit(double v, double t, double x, int m1 = 0, int m2 = 0)
{
    detail::require(v > -1.0 && v < 1.0, "ldp_limit: |v| must be < 1");
    detail::require(t > 0.0, "ldp_limit: t must be > 0");
    detail::check_shift(m1, m2);
    return 2.0 * heat_kernel(1.0 - v * v, t, x) / (std::pow(1.0 + v, 0.5 * (m1 + m2)) * std::pow(1.0 - v, 0.5 * (m1 - m2)));
}

struct BoundSample {
    double t = 1.0;
    double x = 0.0;
    double eps = 0.1;
};

struct Shift {
    int m1 = 0;
    int m2 = 0;
};

inline constexpr std::array<Shift, 3> kChaosShifts{{{0, 0}, {-1, -1}, {-1, 1}}};

// Right-hand side of the two-regime Gaussian envelope for a given constant.
inline double uniform_bound_envelope(double c, const BoundSample& s)
{
    if (s.t <= 100.0 * s.eps * s.eps) return std::fabs(s.x) <= c * s.eps ? c / s.eps : 0.0;
    return c * std::exp(-s.x * s.x / (c * s.t)) / std::sqrt(s.t);
}

inline constexpr std::array<double, 7> kBoundLadder{1, 2, 5, 10, 20, 50, 100};

// Smallest ladder constant that bounds the rescaled walk on every sample and
// every shift; nullopt if 100 is not enough.
inline std::optional<double> uniform_bound_fit(double v, std::span<const BoundSample> samples,
                                               std::span<const Shift> shifts = kChaosShifts)
{
    for (const auto& s : samples) {
        detail::require(s.t > 0.0, "uniform_bound_fit: sample t must be > 0");
        detail::require(s.eps > 0.0, "uniform_bound_fit: sample eps must be > 0");
    }
    for (double c : kBoundLadder) {
        bool ok = true;
        for (const auto& s : samples) {
            const double bound = uniform_bound_envelope(c, s);
            for (const auto& sh : shifts) {
                const double val = rescaled_ssrw({ScalingFrame(s.eps, v), s.t, s.x, sh.m1, sh.m2});
                if (val > bound) {
                    ok = false;
                    break;
                }
            }
            if (!ok) break;
        }
        if (ok) return c;
    }
    return std::nullopt;
}

// (1+k) log((1+k)/(1+v)) + (1-k) log((1-k)/(1-v)); twice the Bernoulli
// relative entropy between speeds k and v, zero only at k = v.
inline double speed_divergence(double k, double v)
{
    detail::require(k > -1.0 && k < 1.0, "speed_divergence: |k| must be < 1");
    detail::require(v > -1.0 && v < 1.0, "speed_divergence: |v| must be < 1");
    return (1.0 + k) * (std::log1p(k) - std::log1p(v)) + (1.0 - k) * (std::log1p(-k) - std::log1p(-v));
}

} // namespace kpzlab
