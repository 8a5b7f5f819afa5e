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
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "kpzlab/errors.hpp"
#include "kpzlab/normal_sampler.hpp"
#include "kpzlab/quadrature.hpp"
#include "kpzlab/ssrw_ldp.hpp"

namespace kpzlab {

// Solution of u_t = (1 - v^2)/2 u_xx with u(0) = 2 delta.
inline double heat_solution(double v, double t, double x)
{
    detail::require(v > -1.0 && v < 1.0, "heat_solution: |v| must be < 1");
    detail::require(t > 0.0, "heat_solution: t must be > 0");
    return 2.0 * heat_kernel(1.0 - v * v, t, x);
}

struct SheGridParams {
    double dx = 0.01;
    double half_width = 4.0;
    double safety = 1.25; // dt = dx^2 / (2 (1 - v^2) safety), rounded down to hit t exactly
};

struct FieldGrid {
    double dx = 0.0;
    double dt = 0.0;
    double half_width = 0.0;
    std::int64_t n_steps = 0;
    std::int64_t half_nodes = 0; // node k = -K..K sits at values[k + K]
    std::vector<double> values;
    double max_boundary_fraction = 0.0; // largest (u_{-K+1} + u_{K-1}) / sum u over all steps
    bool boundary_leak = false;         // max_boundary_fraction > 1e-6

    double x_at(std::size_t idx) const noexcept { return (static_cast<double>(idx) - static_cast<double>(half_nodes)) * dx; }

    // value at the grid node nearest x (0 outside the grid)
    double value_at(double x) const noexcept
    {
        const double k = std::round(x / dx);
        if (std::fabs(k) > static_cast<double>(half_nodes)) return 0.0;
        return values[static_cast<std::size_t>(static_cast<std::int64_t>(k) + half_nodes)];
    }

    double mass() const noexcept
    {
        double s = 0.0;
        for (double u : values) s += u;
        return s * dx;
    }
};

inline constexpr double kBoundaryLeakTolerance = 1e-6;

// Explicit Euler-Maruyama (Ito) scheme for
//   U_t = (1 - v^2)/2 U_xx + v sigma U W_dot,   U(0) = 2 delta,
// with zero Dirichlet values at x = +-K dx. The noise stream is a pure
// function of (seed, replica).
inline FieldGrid she_solve(double v, double sigma, double t, const SheGridParams& g, std::uint64_t seed, std::uint64_t replica = 0)
{
    detail::require(v > -1.0 && v < 1.0, "she_solve: |v| must be < 1");
    detail::require(sigma >= 0.0, "she_solve: sigma must be >= 0");
    detail::require(t > 0.0, "she_solve: t must be > 0");
    detail::require(g.dx > 0.0, "she_solve: dx must be > 0");
    detail::require(g.safety >= 1.25, "she_solve: unstable step, safety factor must be >= 1.25");
    const double a = 1.0 - v * v;
    const double min_width = 6.0 * std::sqrt(a * t);
    detail::require(g.half_width >= min_width,
                    "she_solve: half_width " + std::to_string(g.half_width) + " below 6 sqrt((1-v^2) t) = " + std::to_string(min_width));

    FieldGrid out;
    out.dx = g.dx;
    out.half_width = g.half_width;
    out.half_nodes = static_cast<std::int64_t>(std::floor(g.half_width / g.dx));
    detail::require(out.half_nodes >= 2, "she_solve: grid has fewer than 5 nodes");
    const double dt_max = g.dx * g.dx / (2.0 * a * g.safety);
    out.n_steps = static_cast<std::int64_t>(std::ceil(t / dt_max));
    out.dt = t / static_cast<double>(out.n_steps);

    const std::size_t n = static_cast<std::size_t>(2 * out.half_nodes + 1);
    std::vector<double> u(n, 0.0);
    std::vector<double> w(n, 0.0);
    u[static_cast<std::size_t>(out.half_nodes)] = 2.0 / g.dx;

    const double lam = 0.5 * a * out.dt / (g.dx * g.dx);
    const double c = v * sigma * std::sqrt(out.dt / g.dx);
    const NormalZiggurat& zig = NormalZiggurat::instance();
    Xoshiro256pp rng(seed, replica, StreamTag::she_noise);

    for (std::int64_t s = 0; s < out.n_steps; ++s) {
        double mass = 0.0;
        bool negative = false;
        if (c != 0.0) {
            for (std::size_t k = 1; k + 1 < n; ++k) {
                const double nv = u[k] + lam * (u[k + 1] - 2.0 * u[k] + u[k - 1]) + c * u[k] * zig(rng);
                negative |= nv < 0.0;
                mass += nv;
                w[k] = nv;
            }
        } else {
            for (std::size_t k = 1; k + 1 < n; ++k) {
                const double nv = u[k] + lam * (u[k + 1] - 2.0 * u[k] + u[k - 1]);
                mass += nv;
                w[k] = nv;
            }
        }
        if (negative)
            throw NumericalError("she_solve: negative field value at step " + std::to_string(s + 1) + "; reduce dx or dt");
        if (mass > 0.0) out.max_boundary_fraction = std::max(out.max_boundary_fraction, (w[1] + w[n - 2]) / mass);
        std::swap(u, w);
    }
    out.boundary_leak = out.max_boundary_fraction > kBoundaryLeakTolerance;
    out.values = std::move(u);
    return out;
}

// k-th chaos contribution to E U(t,x)^2 for U(0) = 2 delta:
//   4 p_{a/2}(t,x) (v sigma)^{2k} (4a)^{-(k+1)/2} t^{(k-1)/2} / Gamma((k+1)/2),  a = 1 - v^2.
inline double she_second_moment_term(double v, double sigma, double t, double x, int k)
{
    detail::require(v > -1.0 && v < 1.0, "she_second_moment: |v| must be < 1");
    detail::require(t > 0.0, "she_second_moment: t must be > 0");
    detail::require(k >= 0, "she_second_moment: k must be >= 0");
    const double a = 1.0 - v * v;
    const double vs2 = v * v * sigma * sigma;
    if (k > 0 && vs2 == 0.0) return 0.0;
    const double kk = static_cast<double>(k);
    const double noise = k > 0 ? kk * std::log(vs2) : 0.0;
    const double lt = noise - 0.5 * (kk + 1.0) * std::log(4.0 * a) + 0.5 * (kk - 1.0) * std::log(t) - std::lgamma(0.5 * (kk + 1.0));
    return 4.0 * heat_kernel(0.5 * a, t, x) * std::exp(lt);
}

inline double she_second_moment_series(double v, double sigma, double t, double x, int k_max)
{
    detail::require(k_max >= 0, "she_second_moment_series: k_max must be >= 0");
    double s = 0.0;
    for (int k = 0; k <= k_max; ++k) s += she_second_moment_term(v, sigma, t, x, k);
    return s;
}

namespace detail {

// Integral over the k-simplex of prod_{l=1}^{k+1} dt_l^{-1/2} with total time tau,
// by nested Gauss-Legendre. Each one-dimensional integral is split at tau/2
// and the half touching a square-root singularity is mapped by s = u^2.
inline double simplex_inverse_sqrt(int k, double tau, const GaussLegendre& gl)
{
    if (k == 0) return 1.0 / std::sqrt(tau);
    const double h = std::sqrt(0.5 * tau);
    double sum = 0.0;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
        const double u = 0.5 * h * (gl.nodes[q] + 1.0);
        const double wq = 0.5 * h * gl.weights[q];
        // s in [0, tau/2]: s = u^2, s^{-1/2} ds = 2 du
        sum += wq * 2.0 * simplex_inverse_sqrt(k - 1, tau - u * u, gl);
        // s in [tau/2, tau]: tau - s = u^2, ds = 2u du
        if (u > 0.0) sum += wq * 2.0 * u / std::sqrt(tau - u * u) * simplex_inverse_sqrt(k - 1, u * u, gl);
    }
    return sum;
}

} // namespace detail

// (v sigma)^{2k} times the integral over the time simplex and space of
// prod p_{1-v^2}(dt_l, dx_l)^2 (unit-mass delta; the series terms carry an
// extra factor 4). Spatial Gaussians are integrated in closed form per link.
inline double she_second_moment_quadrature(double v, double sigma, double t, double x, int k, int n_points = 48)
{
    detail::require(k >= 0 && k <= 3, "she_second_moment_quadrature: k must lie in 0..3");
    detail::require(t > 0.0, "she_second_moment_quadrature: t must be > 0");
    detail::require(v > -1.0 && v < 1.0, "she_second_moment_quadrature: |v| must be < 1");
    const double a = 1.0 - v * v;
    if (k == 0) {
        const double p = heat_kernel(a, t, x);
        return p * p;
    }
    const GaussLegendre gl = gauss_legendre(n_points);
    const double j = detail::simplex_inverse_sqrt(k, t, gl);
    const double link = std::pow(4.0 * std::numbers::pi * a, -0.5 * (k + 1));
    return std::pow(v * sigma, 2.0 * k) * link * j * heat_kernel(0.5 * a, t, x);
}

} // namespace kpzlab
