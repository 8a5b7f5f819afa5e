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

#include <cmath>
#include <cstdint>
#include <string>

#include "kpzlab/errors.hpp"

namespace kpzlab {

// (i, j) on the even sublattice: i >= 0 time steps, j space steps, i + j even.
struct LatticePoint {
    std::int64_t i = 0;
    std::int64_t j = 0;

    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

inline bool on_even_sublattice(LatticePoint p) noexcept
{
    return p.i >= 0 && ((p.i + p.j) % 2 == 0);
}

struct SpaceTime {
    double t = 0.0;
    double x = 0.0;
};

// Diffusive frame moving with speed v: (i, j) -> (i eps^2, (j - v i) eps).
class ScalingFrame {
public:
    ScalingFrame(double epsilon, double v) : eps_(epsilon), v_(v)
    {
        detail::require(std::isfinite(epsilon) && epsilon > 0.0, "ScalingFrame: epsilon must be > 0");
        detail::require(v > 0.0 && v < 1.0, "ScalingFrame: v must lie in (0, 1)");
    }

    double eps() const noexcept { return eps_; }
    double v() const noexcept { return v_; }

    // Lower cell edges. The evaluation order here is the one snap() compares
    // against, so snap(affine_map(p)) == p holds bit-exactly.
    double time_of(std::int64_t i) const noexcept { return (static_cast<double>(i) * eps_) * eps_; }
    double space_of(std::int64_t i, std::int64_t j) const noexcept
    {
        return (static_cast<double>(j) - v_ * static_cast<double>(i)) * eps_;
    }

private:
    double eps_;
    double v_;
};

inline SpaceTime affine_map(const ScalingFrame& f, LatticePoint p) noexcept
{
    return {f.time_of(p.i), f.space_of(p.i, p.j)};
}

struct SnappedPoint {
    double t_eps = 0.0;
    double x_eps = 0.0;
    LatticePoint point;
};

// Cell containing (t, x); bottom and left edges belong to the cell, top and
// right edges do not. Boundary cases follow the floating-point comparison.
inline SnappedPoint snap(const ScalingFrame& f, double t, double x)
{
    detail::require(std::isfinite(t) && t >= 0.0, "snap: t must be >= 0");
    detail::require(std::isfinite(x), "snap: x must be finite");
    const double e = f.eps();

    auto i = static_cast<std::int64_t>(std::floor(t / e / e));
    if (i < 0) i = 0;
    while (i > 0 && f.time_of(i) > t) --i;
    while (f.time_of(i + 1) <= t) ++i;

    auto j = static_cast<std::int64_t>(std::floor(x / e + f.v() * static_cast<double>(i)));
    if (((i + j) % 2) != 0) --j;
    while (f.space_of(i, j) > x) j -= 2;
    while (f.space_of(i, j + 2) <= x) j += 2;

    return {f.time_of(i), f.space_of(i, j), {i, j}};
}

// Area of the image of the cell [i, i+1) x [j, j+2) under the frame map.
inline double cell_area(const ScalingFrame& f, LatticePoint p = {}) noexcept
{
    const SpaceTime o = affine_map(f, p);
    const SpaceTime a = affine_map(f, {p.i + 1, p.j});
    const SpaceTime b = affine_map(f, {p.i, p.j + 2});
    return std::fabs((a.t - o.t) * (b.x - o.x) - (a.x - o.x) * (b.t - o.t));
}

} // namespace kpzlab
