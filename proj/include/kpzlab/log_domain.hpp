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
#include <cmath>
#include <limits>
#include <span>

namespace kpzlab {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(e^a + e^b), exact for -inf operands.
inline double log_add(double a, double b) noexcept
{
    if (a < b) std::swap(a, b);
    if (b == kNegInf) return a;
    return a + std::log1p(std::exp(b - a));
}

inline double log_sum_exp(std::span<const double> xs) noexcept
{
    double m = kNegInf;
    for (double x : xs) m = std::max(m, x);
    if (m == kNegInf) return kNegInf;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

// Real number stored as sign * exp(log_abs). Zero has sign 0.
struct SignedLog {
    double log_abs = kNegInf;
    int sign = 0;

    static SignedLog from_value(double x) noexcept
    {
        if (x == 0.0) return {};
        return {std::log(std::fabs(x)), x > 0 ? 1 : -1};
    }
    static SignedLog from_log(double lx) noexcept
    {
        if (lx == kNegInf) return {};
        return {lx, 1};
    }
    double value() const noexcept { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
    bool is_zero() const noexcept { return sign == 0; }

    friend SignedLog operator*(SignedLog a, SignedLog b) noexcept
    {
        if (a.sign == 0 || b.sign == 0) return {};
        return {a.log_abs + b.log_abs, a.sign * b.sign};
    }
};

// e^la - e^lb as a signed log.
inline SignedLog log_diff(double la, double lb) noexcept
{
    if (la == lb) return {};
    if (lb == kNegInf) return SignedLog::from_log(la);
    if (la == kNegInf) return {lb, -1};
    if (la > lb) return {la + std::log1p(-std::exp(lb - la)), 1};
    return {lb + std::log1p(-std::exp(la - lb)), -1};
}

} // namespace kpzlab
