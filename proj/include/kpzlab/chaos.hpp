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
#include <span>
#include <vector>

#include "kpzlab/errors.hpp"
#include "kpzlab/log_domain.hpp"
#include "kpzlab/rwre_polymer.hpp"
#include "kpzlab/scaling.hpp"
#include "kpzlab/ssrw_ldp.hpp"

namespace kpzlab {

struct ChaosTerm {
    std::vector<LatticePoint> points;
    double coefficient = 0.0;
};

namespace detail {

inline void check_chaos_points(std::int64_t N, std::span<const LatticePoint> pts)
{
    std::int64_t prev = -1;
    for (const auto& p : pts) {
        require(on_even_sublattice(p), "chaos: point off the even sublattice");
        require(p.i > prev, "chaos: point times must be strictly increasing");
        prev = p.i;
    }
    require(prev <= N - 1, "chaos: last point time must be <= N - 1");
}

// P(S_n = m - 1) - P(S_n = m + 1), the influence of one disorder variable.
inline SignedLog log_bracket(std::int64_t n, std::int64_t m)
{
    return log_diff(ssrw_log_prob(n, m - 1), ssrw_log_prob(n, m + 1));
}

} // namespace detail

// Coefficient of prod omega_{z_l} in the expansion of P(S_N = y), as a signed log.
inline SignedLog chaos_coefficient_log(std::int64_t N, std::int64_t y, std::span<const LatticePoint> pts)
{
    detail::check_chaos_points(N, pts);
    if (pts.empty()) return SignedLog::from_log(ssrw_log_prob(N, y));
    SignedLog acc = SignedLog::from_log(ssrw_log_prob(pts[0].i, pts[0].j) - static_cast<double>(pts.size()) * std::numbers::ln2);
    for (std::size_t l = 1; l <= pts.size(); ++l) {
        const LatticePoint next = l < pts.size() ? pts[l] : LatticePoint{N, y};
        acc = acc * detail::log_bracket(next.i - pts[l - 1].i - 1, next.j - pts[l - 1].j);
        if (acc.is_zero()) break;
    }
    return acc;
}

inline double chaos_coefficient(std::int64_t N, std::int64_t y, std::span<const LatticePoint> pts)
{
    return chaos_coefficient_log(N, y, pts).value();
}

// P(S_N = y) as a polynomial in eta = sqrt(eps); coefficients[d] is the sum
// of all degree-d chaos terms. Kept in extended precision: near y = +-N the
// coefficients alternate in sign and evaluation cancels heavily.
struct PolyExpansion {
    std::int64_t N = 0;
    std::int64_t y = 0;
    std::vector<long double> coefficients;

    double evaluate(double eta) const noexcept
    {
        long double s = 0.0L;
        for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) s = s * static_cast<long double>(eta) + *it;
        return static_cast<double>(s);
    }
};

inline constexpr std::int64_t kMaxPolyDegree = 24;

// The walk recursion carried out over polynomials in eta truncated at degree N
// (which is exact: each step adds at most one power).
template <OmegaField F>
PolyExpansion chaos_poly_dp(const F& field, std::int64_t N, std::int64_t y)
{
    detail::require(N >= 0 && N <= kMaxPolyDegree, "chaos_poly_dp: N must lie in 0..24");
    const std::size_t D = static_cast<std::size_t>(N) + 1;
    // row n holds sites j = -n + 2k, k = 0..n, each a polynomial of D coefficients
    std::vector<long double> cur(D * D, 0.0L);
    std::vector<long double> nxt(D * D, 0.0L);
    cur[0] = 1.0L;
    for (std::int64_t n = 0; n < N; ++n) {
        std::fill(nxt.begin(), nxt.begin() + static_cast<std::ptrdiff_t>((n + 2) * D), 0.0L);
        for (std::int64_t k = 0; k <= n; ++k) {
            const std::int64_t j = -n + 2 * k;
            const long double w = field.omega(n, j);
            const long double* p = &cur[static_cast<std::size_t>(k) * D];
            long double* upv = &nxt[static_cast<std::size_t>(k + 1) * D];
            long double* dnv = &nxt[static_cast<std::size_t>(k) * D];
            for (std::size_t d = 0; d <= static_cast<std::size_t>(n); ++d) {
                upv[d] += 0.5L * p[d];
                dnv[d] += 0.5L * p[d];
                upv[d + 1] += 0.5L * w * p[d];
                dnv[d + 1] -= 0.5L * w * p[d];
            }
        }
        std::swap(cur, nxt);
    }
    PolyExpansion out;
    out.N = N;
    out.y = y;
    out.coefficients.assign(D, 0.0L);
    if (y >= -N && y <= N && ((y + N) % 2) == 0) {
        const std::size_t k = static_cast<std::size_t>((y + N) / 2);
        std::copy_n(&cur[k * D], D, out.coefficients.begin());
    }
    return out;
}

inline constexpr std::int64_t kMaxEnumerationN = 8;

namespace detail {

struct BracketTable {
    std::int64_t N;
    std::vector<double> first; // P(S_i = j) at [i][j + N]
    std::vector<double> link;  // bracket(n, m) at [n][m + N + 1]

    explicit BracketTable(std::int64_t n_max) : N(n_max)
    {
        const std::int64_t W = 2 * N + 3;
        first.assign(static_cast<std::size_t>((N + 1) * W), 0.0);
        link.assign(static_cast<std::size_t>((N + 1) * W), 0.0);
        for (std::int64_t i = 0; i <= N; ++i) {
            for (std::int64_t j = -N - 1; j <= N + 1; ++j) {
                first[static_cast<std::size_t>(i * W + j + N + 1)] = std::exp(ssrw_log_prob(i, j));
                link[static_cast<std::size_t>(i * W + j + N + 1)] = log_bracket(i, j).value();
            }
        }
    }
    double p(std::int64_t i, std::int64_t j) const { return first[static_cast<std::size_t>(i * (2 * N + 3) + j + N + 1)]; }
    double b(std::int64_t n, std::int64_t m) const { return link[static_cast<std::size_t>(n * (2 * N + 3) + m + N + 1)]; }
};

template <OmegaField F>
void enumerate_from(const F& field, const BracketTable& tab, std::int64_t N, std::int64_t y, std::int64_t pi, std::int64_t pj,
                    double acc, std::size_t degree, std::vector<double>& sums)
{
    for (std::int64_t i = pi + 1; i <= N - 1; ++i) {
        const std::int64_t reach = N - i;
        for (std::int64_t j = y - reach; j <= y + reach; ++j) {
            if (((i + j) % 2) != 0) continue;
            double f;
            if (pi < 0) {
                if (j < -i || j > i) continue;
                f = tab.p(i, j);
            } else {
                const std::int64_t dj = j - pj;
                const std::int64_t gap = i - pi - 1;
                if (dj < -(gap + 1) || dj > gap + 1) continue;
                f = tab.b(gap, dj);
            }
            if (f == 0.0) continue;
            const double a = acc * 0.5 * f * field.omega(i, j);
            sums[degree + 1] += a * tab.b(N - i - 1, y - j);
            enumerate_from(field, tab, N, y, i, j, a, degree + 1, sums);
        }
    }
}

} // namespace detail

// Degree-by-degree sums of coefficient * prod omega over every point tuple,
// by direct enumeration of tuples inside the cone that reaches (N, y).
template <OmegaField F>
std::vector<double> enumerate_chaos(const F& field, std::int64_t N, std::int64_t y)
{
    detail::require(N >= 0 && N <= kMaxEnumerationN, "enumerate_chaos: N must lie in 0..8");
    std::vector<double> sums(static_cast<std::size_t>(N) + 1, 0.0);
    sums[0] = std::exp(ssrw_log_prob(N, y));
    if (y < -N || y > N || ((y + N) % 2) != 0) return sums;
    const detail::BracketTable tab(N);
    detail::enumerate_from(field, tab, N, y, -1, 0, 1.0, 0, sums);
    return sums;
}

// |P(S_N = y) - sum_k eps^{k/2} sum_tuples coefficient * prod omega|
template <OmegaField F>
double chaos_identity_residual(const F& field, double eps, std::int64_t N, std::int64_t y)
{
    detail::require(N <= kMaxEnumerationN, "chaos_identity_residual: N must be <= 8");
    const std::vector<double> sums = enumerate_chaos(field, N, y);
    const double eta = std::sqrt(eps);
    double series = 0.0;
    for (auto it = sums.rbegin(); it != sums.rend(); ++it) series = series * eta + *it;
    const double p = std::exp(rwre_log_transition(field, eps, N, y));
    return std::fabs(p - series);
}

namespace detail {
inline void check_increasing(std::span<const SpaceTime> pts, double t)
{
    double prev = 0.0;
    for (const auto& p : pts) {
        require(p.t > prev, "chaos: point times must satisfy 0 < t_1 < ... < t_k < t");
        prev = p.t;
    }
    require(t > prev, "chaos: final time must exceed the last point time");
}
} // namespace detail

// eps^{-(1+k)} exp[(t_eps/eps^2) I + (x_eps/eps) I'] times the coefficient at
// the snapped points, assembled link by link from shifted rescaled walks.
inline double rescaled_chaos_coefficient(const ScalingFrame& frame, std::span<const SpaceTime> pts, double t, double x)
{
    detail::check_increasing(pts, t);
    std::vector<LatticePoint> z;
    z.reserve(pts.size() + 2);
    z.push_back({0, 0});
    for (const auto& p : pts) z.push_back(snap(frame, p.t, p.x).point);
    z.push_back(snap(frame, t, x).point);
    for (std::size_t l = 1; l < z.size(); ++l)
        if (z[l].i <= z[l - 1].i) return 0.0;

    SignedLog acc = SignedLog::from_log(log_rescaled_ssrw_at(frame, z[1], 0, 0) - static_cast<double>(pts.size()) * std::numbers::ln2);
    for (std::size_t l = 2; l < z.size() && !acc.is_zero(); ++l) {
        const LatticePoint d{z[l].i - z[l - 1].i, z[l].j - z[l - 1].j};
        acc = acc * log_diff(log_rescaled_ssrw_at(frame, d, -1, -1), log_rescaled_ssrw_at(frame, d, -1, 1));
    }
    return acc.value();
}

// 2 (2v)^k prod over links of p_{1-v^2}(dt, dx), the small-eps limit of the above.
inline double chaos_coefficient_limit(double v, std::span<const SpaceTime> pts, double t, double x)
{
    detail::check_increasing(pts, t);
    const double a = 1.0 - v * v;
    double val = 2.0 * std::pow(2.0 * v, static_cast<double>(pts.size()));
    SpaceTime prev{0.0, 0.0};
    for (std::size_t l = 0; l <= pts.size(); ++l) {
        const SpaceTime next = l < pts.size() ? pts[l] : SpaceTime{t, x};
        val *= heat_kernel(a, next.t - prev.t, next.x - prev.x);
        prev = next;
    }
    return val;
}

} // namespace kpzlab
