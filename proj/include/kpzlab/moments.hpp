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
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kpzlab/errors.hpp"
#include "kpzlab/quadrature.hpp"
#include "kpzlab/rwre_polymer.hpp"
#include "kpzlab/scaling.hpp"
#include "kpzlab/ssrw_ldp.hpp"

namespace kpzlab {

using cplx = std::complex<double>;

struct CircleContour {
    cplx center{0.0, 0.0};
    double radius = 1.0;
    int n_points = 256;
};

// r + i y for |y| <= half_length; half_length 0 means "pick from the tail bound"
struct LineContour {
    double offset = 0.0;
    double half_length = 0.0;
    int n_points = 512;
};

struct MomentResult {
    double value = 0.0;
    double imag_residual = 0.0;
    std::int64_t evaluations = 0;
    double tail_bound = 0.0; // line contours: endpoint/peak ratio of the Gaussian factor
};

inline constexpr double kPoleMargin = 1e-3;

// E{Z(T, n_1) ... Z(T, n_k)} for Beta(alpha, beta) weights, k in {1, 2},
// n_1 >= n_2. log_scale[j] (optional) is added to the log of factor j before
// exponentiation, which is how rescaled moments avoid overflow.
struct BetaMomentJob {
    std::int64_t T = 0;
    std::vector<std::int64_t> n;
    double alpha = 1.0;
    double beta = 1.0;
    std::vector<CircleContour> contours; // contours[0] is the outer (z_1) circle
    std::vector<double> log_scale;
};

inline double pochhammer_log(double nu, int k) { return std::lgamma(nu + k) - std::lgamma(nu); }

namespace detail {

inline void check_circles(const BetaMomentJob& job, double nu)
{
    const std::size_t k = job.n.size();
    for (std::size_t j = 0; j < k; ++j) {
        const CircleContour& c = job.contours[j];
        require(c.radius > 0.0 && c.n_points >= 4, "beta_moment_contour: circle needs radius > 0 and >= 4 points");
        const double d0 = c.radius - std::abs(c.center);
        if (d0 < kPoleMargin)
            throw ConfigError("beta_moment_contour: circle " + std::to_string(j + 1) + " passes within " + std::to_string(d0) + " of the pole at 0");
        const double dnu = std::abs(cplx(-nu, 0.0) - c.center) - c.radius;
        if (dnu < kPoleMargin)
            throw ConfigError("beta_moment_contour: circle " + std::to_string(j + 1) + " does not exclude -nu (margin " + std::to_string(dnu) + ")");
    }
    for (std::size_t A = 0; A < k; ++A) {
        for (std::size_t B = A + 1; B < k; ++B) {
            const CircleContour& ca = job.contours[A];
            const CircleContour& cb = job.contours[B];
            const double gap = ca.radius - std::abs(cb.center + 1.0 - ca.center) - cb.radius;
            if (gap < kPoleMargin)
                throw ConfigError("beta_moment_contour: circle " + std::to_string(A + 1) + " must contain circle " + std::to_string(B + 1) +
                                  " shifted by 1 (margin " + std::to_string(gap) + ")");
        }
    }
}

// Node values of one factor times (1/(2 pi i)) dz, midpoint rule in angle.
inline std::vector<std::pair<cplx, cplx>> circle_factor(const CircleContour& c, std::int64_t T, std::int64_t n, double mu, double nu, double log_scale)
{
    std::vector<std::pair<cplx, cplx>> out(static_cast<std::size_t>(c.n_points));
    const double M = static_cast<double>(c.n_points);
    const double nd = static_cast<double>(n);
    const double Td = static_cast<double>(T);
    // extended precision keeps exp of a large log from amplifying rounding
    using lcplx = std::complex<long double>;
    const lcplx lc(c.center.real(), c.center.imag());
    const long double lr = c.radius;
    const long double lmu = mu;
    const long double lnu_ = nu;
    for (int m = 0; m < c.n_points; ++m) {
        const long double th = 2.0L * std::numbers::pi_v<long double> * (m + 0.5L) / M;
        const lcplx e(std::cos(th), std::sin(th));
        const lcplx z = lc + lr * e;
        const lcplx lnu = std::log(lnu_ + z);
        const lcplx lg = static_cast<long double>(nd) * (lnu - std::log(z)) + static_cast<long double>(Td) * (std::log(lmu + z) - lnu) - 2.0L * lnu +
                         static_cast<long double>(log_scale);
        const lcplx w = std::exp(lg) * (lr * e / static_cast<long double>(M));
        out[static_cast<std::size_t>(m)] = {cplx(static_cast<double>(z.real()), static_cast<double>(z.imag())),
                                            cplx(static_cast<double>(w.real()), static_cast<double>(w.imag()))};
    }
    return out;
}

} // namespace detail

namespace detail {

inline double beta_log_abs_factor(cplx z, std::int64_t T, std::int64_t n, double mu, double nu)
{
    const double ln = std::log(std::abs(nu + z));
    return static_cast<double>(n) * (ln - std::log(std::abs(z))) + static_cast<double>(T) * (std::log(std::abs(mu + z)) - ln) - 2.0 * ln;
}

// log of max |factor| * radius over a ring of samples that includes both
// real-axis crossings, where the factor peaks
inline double beta_log_scale(const CircleContour& c, std::int64_t T, std::int64_t n, double mu, double nu)
{
    double m = -std::numeric_limits<double>::infinity();
    for (int q = 0; q < 48; ++q) {
        const double th = 2.0 * std::numbers::pi * q / 48.0;
        m = std::max(m, beta_log_abs_factor(c.center + c.radius * cplx(std::cos(th), std::sin(th)), T, n, mu, nu));
    }
    return m + std::log(c.radius);
}

// Cauchy-style bound on midpoint-rule aliasing for circle c: the factor on
// concentric circles inside the annulus of analyticity, times (ratio)^M.
// Around the origin the pole at 0 only contributes finitely many Laurent
// terms and aliases nothing.
inline double beta_log_alias(const CircleContour& c, std::int64_t T, std::int64_t n, double mu, double nu, int M)
{
    const double cen = c.center.real();
    const double outer_lim = cen + nu;
    double out = std::numeric_limits<double>::infinity();
    for (double s : {0.2, 0.4, 0.6, 0.8, 0.95}) {
        const double R = c.radius + s * (outer_lim - c.radius);
        out = std::min(out, beta_log_scale({c.center, R, M}, T, n, mu, nu) + M * std::log(c.radius / R));
    }
    if (cen == 0.0) return out;
    const double inner_lim = std::fabs(cen);
    double in = std::numeric_limits<double>::infinity();
    for (double s : {0.05, 0.2, 0.4, 0.6, 0.8}) {
        const double R = inner_lim + s * (c.radius - inner_lim);
        in = std::min(in, beta_log_scale({c.center, R, M}, T, n, mu, nu) + M * std::log(R / c.radius));
    }
    return log_add(out, in);
}

inline constexpr double kLogRounding = -36.05; // log(2.2e-16)

inline double beta_log_error(const CircleContour& c, std::int64_t T, std::int64_t n, double mu, double nu, int M)
{
    return log_add(kLogRounding + beta_log_scale(c, T, n, mu, nu), beta_log_alias(c, T, n, mu, nu, M));
}

} // namespace detail

// Circles for beta_moment_contour picked by a small search that minimises an
// estimate of the absolute quadrature error: the size of the integrand on the
// circle times (rounding + rho^M), rho being the geometric convergence rate
// set by the nearest singularities. k = 1 may use an off-centre circle whose
// left crossing sits between -nu and 0, which avoids the cancellation of
// origin-centred circles when n is close to T + 1. k = 2 uses origin-centred
// nested circles and needs alpha + beta > 1.
inline std::vector<CircleContour> default_beta_circles(std::int64_t T, std::span<const std::int64_t> n, double alpha, double beta, int n_points = 512)
{
    detail::require(n.size() == 1 || n.size() == 2, "default_beta_circles: k must be 1 or 2");
    detail::require(alpha > 0.0 && beta > 0.0, "default_beta_circles: alpha and beta must be > 0");
    detail::require(n_points >= 16, "default_beta_circles: need at least 16 points");
    const double mu = alpha;
    const double nu = alpha + beta;
    const double gap = std::max(2.0 * kPoleMargin, 1e-3 * nu);
    const int G = 32;
    auto lin = [&](double lo, double hi, int q) { return lo + (hi - lo) * (q + 0.5) / G; };

    if (n.size() == 1) {
        auto cost = [&](const CircleContour& c) { return detail::beta_log_error(c, T, n[0], mu, nu, n_points); };
        // origin-centred radii first
        CircleContour best{{0.0, 0.0}, 0.5 * nu, n_points};
        double bc = std::numeric_limits<double>::infinity();
        for (int q = 0; q < G; ++q) {
            const CircleContour c{{0.0, 0.0}, lin(gap, nu - gap, q), n_points};
            const double v = cost(c);
            if (v < bc) {
                bc = v;
                best = c;
            }
        }
        // then circles through a in (-nu, 0) and b > 0, in (log(a + nu), log b)
        auto make = [&](double la, double lb) {
            const double a = std::min(-nu + std::exp(la), -gap);
            const double b = std::exp(lb);
            return CircleContour{{0.5 * (a + b), 0.0}, 0.5 * (b - a), n_points};
        };
        const double la_lo = std::log(gap);
        const double la_hi = std::log(nu - gap);
        const double lb_lo = std::log(gap);
        const double lb_hi = std::log(100.0 * nu);
        const int H = G / 2;
        for (int qa = 0; qa < H; ++qa) {
            for (int qb = 0; qb < H; ++qb) {
                const CircleContour c = make(la_lo + (la_hi - la_lo) * (qa + 0.5) / H, lb_lo + (lb_hi - lb_lo) * (qb + 0.5) / H);
                const double v = cost(c);
                if (v < bc) {
                    bc = v;
                    best = c;
                }
            }
        }
        // local refinement of centre and radius
        double sc = 0.05 * best.radius;
        double sr = 0.05 * best.radius;
        for (int it = 0; it < 40 && sr > 1e-4 * best.radius; ++it) {
            bool moved = false;
            for (auto [dc, dr] : {std::pair{sc, 0.0}, std::pair{-sc, 0.0}, std::pair{0.0, sr}, std::pair{0.0, -sr}}) {
                const CircleContour c{{best.center.real() + dc, 0.0}, best.radius + dr, n_points};
                if (c.radius - std::fabs(c.center.real()) < gap || c.center.real() + nu - c.radius < gap) continue;
                const double v = cost(c);
                if (v < bc) {
                    bc = v;
                    best = c;
                    moved = true;
                }
            }
            if (!moved) {
                sc *= 0.5;
                sr *= 0.5;
            }
        }
        return {best};
    }

    detail::require(nu > 1.0 + 4.0 * gap, "default_beta_circles: nested circles need alpha + beta > 1");
    std::vector<CircleContour> best{{{0.0, 0.0}, 0.0, n_points}, {{0.0, 0.0}, 0.0, n_points}};
    double best_cost = std::numeric_limits<double>::infinity();
    const int H = G / 2;
    for (int q2 = 0; q2 < H; ++q2) {
        const double r2 = gap + (nu - 1.0 - 4.0 * gap) * (q2 + 0.5) / H;
        const CircleContour c2{{0.0, 0.0}, r2, n_points};
        const double s2 = detail::beta_log_scale(c2, T, n[1], mu, nu);
        const double a2 = detail::beta_log_alias(c2, T, n[1], mu, nu, n_points);
        for (int q1 = 0; q1 < H; ++q1) {
            const double r1 = r2 + 1.0 + gap + (nu - r2 - 1.0 - 2.0 * gap) * (q1 + 0.5) / H;
            const CircleContour c1{{0.0, 0.0}, r1, n_points};
            const double s1 = detail::beta_log_scale(c1, T, n[0], mu, nu);
            const double a1 = detail::beta_log_alias(c1, T, n[0], mu, nu, n_points);
            // the cross factor d/(d-1) is singular on |z_1 - 1 - z_2| = 0
            const double cross = std::log((r1 + r2) / (r1 - r2 - 1.0));
            const double rho = std::max((r2 + 1.0) / r1, r2 / (r1 - 1.0));
            double err = s1 + s2 + cross + log_add(detail::kLogRounding, n_points * std::log(rho));
            err = log_add(err, a1 + s2 + cross);
            err = log_add(err, s1 + a2 + cross);
            if (err < best_cost) {
                best_cost = err;
                best = {c1, c2};
            }
        }
    }
    return best;
}

inline MomentResult beta_moment_contour(const BetaMomentJob& job)
{
    const std::size_t k = job.n.size();
    detail::require(k == 1 || k == 2, "beta_moment_contour: k must be 1 or 2");
    detail::require(job.contours.size() == k, "beta_moment_contour: need one contour per factor");
    detail::require(job.log_scale.empty() || job.log_scale.size() == k, "beta_moment_contour: log_scale size must match k");
    detail::require(job.alpha > 0.0 && job.beta > 0.0, "beta_moment_contour: alpha and beta must be > 0");
    detail::require(job.T >= 0, "beta_moment_contour: T must be >= 0");
    if (k == 2) detail::require(job.n[0] >= job.n[1], "beta_moment_contour: targets must satisfy n_1 >= n_2");
    const double mu = job.alpha;
    const double nu = job.alpha + job.beta;
    detail::check_circles(job, nu);

    auto scale = [&](std::size_t j) { return job.log_scale.empty() ? 0.0 : job.log_scale[j]; };
    const double poch = std::exp(pochhammer_log(nu, static_cast<int>(k)));
    MomentResult res;
    cplx total(0.0, 0.0);
    if (k == 1) {
        for (const auto& [z, f] : detail::circle_factor(job.contours[0], job.T, job.n[0], mu, nu, scale(0))) total += f;
        res.evaluations = job.contours[0].n_points;
    } else {
        const auto f1 = detail::circle_factor(job.contours[0], job.T, job.n[0], mu, nu, scale(0));
        const auto f2 = detail::circle_factor(job.contours[1], job.T, job.n[1], mu, nu, scale(1));
        for (const auto& [z1, a1] : f1) {
            cplx inner(0.0, 0.0);
            for (const auto& [z2, a2] : f2) {
                const cplx d = z1 - z2;
                inner += a2 * (d / (d - 1.0));
            }
            total += a1 * inner;
        }
        res.evaluations = static_cast<std::int64_t>(f1.size() * f2.size());
    }
    total *= poch;
    res.value = total.real();
    res.imag_residual = std::fabs(total.imag());
    return res;
}

// C(T, n-1) (mu/nu)^{T-n+1} ((nu-mu)/nu)^{n-1}: the single-path expectation.
inline double beta_moment_closed_form(std::int64_t T, std::int64_t n, double alpha, double beta)
{
    detail::require(alpha > 0.0 && beta > 0.0, "beta_moment_closed_form: alpha and beta must be > 0");
    if (n < 1 || n > T + 1) return 0.0;
    const double nu = alpha + beta;
    const double Td = static_cast<double>(T);
    const double nd = static_cast<double>(n);
    const double lc = std::lgamma(Td + 1.0) - std::lgamma(nd) - std::lgamma(Td - nd + 2.0);
    return std::exp(lc + (Td - nd + 1.0) * std::log(alpha / nu) + (nd - 1.0) * std::log(beta / nu));
}

// E[B^a (1 - B)^b] for B ~ Beta(alpha, beta).
inline double beta_joint_moment(int a, int b, double alpha, double beta)
{
    return std::exp(std::lgamma(alpha + a) + std::lgamma(beta + b) - std::lgamma(alpha + beta + a + b) - std::lgamma(alpha) - std::lgamma(beta) +
                    std::lgamma(alpha + beta));
}

inline constexpr std::int64_t kMaxOracleT = 8;

// Exhaustive lattice evaluation: every path (pair) from (0,1) to (T, n_j),
// with exact joint moments at shared vertices.
inline double beta_moment_oracle(std::int64_t T, std::span<const std::int64_t> n, double alpha, double beta)
{
    detail::require(T >= 0 && T <= kMaxOracleT, "beta_moment_oracle: T must lie in 0..8");
    detail::require(n.size() == 1 || n.size() == 2, "beta_moment_oracle: k must be 1 or 2");
    detail::require(alpha > 0.0 && beta > 0.0, "beta_moment_oracle: alpha and beta must be > 0");

    // a path is a T-bit mask, bit i-1 set when step i moves x -> x+1
    auto paths_to = [&](std::int64_t target) {
        std::vector<std::uint32_t> out;
        for (std::uint32_t m = 0; m < (1u << T); ++m)
            if (static_cast<std::int64_t>(std::popcount(m)) == target - 1) out.push_back(m);
        return out;
    };
    using Counts = std::map<std::pair<std::int64_t, std::int64_t>, std::pair<int, int>>;
    auto add_path = [&](Counts& c, std::uint32_t m) {
        std::int64_t x = 1;
        for (std::int64_t i = 1; i <= T; ++i) {
            const bool diag = (m >> (i - 1)) & 1u;
            if (diag) ++x;
            auto& e = c[{i, x}];
            (diag ? e.second : e.first) += 1;
        }
    };
    auto expectation = [&](const Counts& c) {
        long double e = 1.0L;
        for (const auto& [site, ab] : c) e *= static_cast<long double>(beta_joint_moment(ab.first, ab.second, alpha, beta));
        return e;
    };

    long double total = 0.0L;
    const auto p1 = paths_to(n[0]);
    if (n.size() == 1) {
        for (auto m : p1) {
            Counts c;
            add_path(c, m);
            total += expectation(c);
        }
    } else {
        const auto p2 = paths_to(n[1]);
        for (auto m1 : p1) {
            for (auto m2 : p2) {
                Counts c;
                add_path(c, m1);
                add_path(c, m2);
                total += expectation(c);
            }
        }
    }
    return static_cast<double>(total);
}

// SHE moments E{V(t,x_1)...V(t,x_k)}, k in {1, 2}, x_1 >= x_2, on vertical lines.
struct SheMomentJob {
    double t = 1.0;
    std::vector<double> x;
    double gamma = 0.25;
    std::vector<LineContour> lines;
};

struct SheExponent {
    double c = 0.0; // coefficient of t z^2
    double d = 0.0; // coefficient of -x z
    double log_prefactor = 0.0; // per factor: log((1-2g)^2 / (2 (1-g)^2))
};

inline SheExponent she_exponent(double gamma)
{
    detail::require(gamma > 0.0 && gamma < 0.5, "she moment: gamma must lie in (0, 1/2)");
    const double q = 1.0 - 2.0 * gamma;
    const double g1 = gamma * (1.0 - gamma);
    return {q * q * q * q / (8.0 * g1), q * q / (2.0 * g1), std::log(q * q / (2.0 * (1.0 - gamma) * (1.0 - gamma)))};
}

inline constexpr double kTailRatio = 1e-16;

// Lines through the real saddle of each factor, pushed apart to keep
// r_j > r_{j+1} + 1 with margin 0.5.
inline std::vector<LineContour> default_she_lines(double t, std::span<const double> x, double gamma, int n_points)
{
    const SheExponent e = she_exponent(gamma);
    std::vector<LineContour> lines(x.size());
    for (std::size_t j = x.size(); j-- > 0;) {
        lines[j].offset = e.d * x[j] / (2.0 * e.c * t);
        if (j + 1 < x.size()) lines[j].offset = std::max(lines[j].offset, lines[j + 1].offset + 1.5);
        lines[j].n_points = n_points;
    }
    return lines;
}

inline MomentResult she_moment_contour(const SheMomentJob& job)
{
    const std::size_t k = job.x.size();
    detail::require(k == 1 || k == 2, "she_moment_contour: k must be 1 or 2");
    detail::require(job.t > 0.0, "she_moment_contour: t must be > 0");
    detail::require(job.lines.size() == k, "she_moment_contour: need one line per factor");
    if (k == 2) {
        detail::require(job.x[0] >= job.x[1], "she_moment_contour: need x_1 >= x_2");
        detail::require(job.lines[0].offset > job.lines[1].offset + 1.0, "she_moment_contour: need r_1 > r_2 + 1");
    }
    const SheExponent e = she_exponent(job.gamma);
    const double ct = e.c * job.t;

    MomentResult res;
    std::vector<std::vector<std::pair<cplx, cplx>>> nodes(k);
    for (std::size_t j = 0; j < k; ++j) {
        const LineContour& ln = job.lines[j];
        detail::require(ln.n_points >= 8, "she_moment_contour: need >= 8 points per line");
        const double L = ln.half_length > 0.0 ? ln.half_length : std::sqrt(-std::log(kTailRatio) / ct) * 1.05;
        const double ratio = std::exp(-ct * L * L);
        res.tail_bound = std::max(res.tail_bound, ratio);
        if (!(ratio < kTailRatio))
            throw ConfigError("she_moment_contour: truncation half-length " + std::to_string(L) + " leaves Gaussian tail ratio " + std::to_string(ratio) +
                              " >= 1e-16; need L >= " + std::to_string(std::sqrt(-std::log(kTailRatio) / ct)));
        const GaussLegendre gl = gauss_legendre(ln.n_points);
        nodes[j].resize(gl.nodes.size());
        for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
            const double y = L * gl.nodes[q];
            const cplx z(ln.offset, y);
            // dz / (2 pi i) = dy / (2 pi)
            const cplx f = std::exp(ct * z * z - e.d * job.x[j] * z + e.log_prefactor) * (L * gl.weights[q] / (2.0 * std::numbers::pi));
            nodes[j][q] = {z, f};
        }
    }
    cplx total(0.0, 0.0);
    if (k == 1) {
        for (const auto& [z, f] : nodes[0]) total += f;
        res.evaluations = static_cast<std::int64_t>(nodes[0].size());
    } else {
        for (const auto& [z1, a1] : nodes[0]) {
            cplx inner(0.0, 0.0);
            for (const auto& [z2, a2] : nodes[1]) {
                const cplx d = z1 - z2;
                inner += a2 * (d / (d - 1.0));
            }
            total += a1 * inner;
        }
        res.evaluations = static_cast<std::int64_t>(nodes[0].size() * nodes[1].size());
    }
    res.value = total.real();
    res.imag_residual = std::fabs(total.imag());
    return res;
}

// (gamma / (1 - gamma)) p_{gamma (1 - gamma)}(t, x)
inline double she_moment_closed_form(double gamma, double t, double x)
{
    detail::require(gamma > 0.0 && gamma < 0.5, "she_moment_closed_form: gamma must lie in (0, 1/2)");
    return gamma / (1.0 - gamma) * heat_kernel(gamma * (1.0 - gamma), t, x);
}

// Exponent of the rescaled integrand with alpha = beta = 1/eps:
// f(z) = log((alpha + z)/(2 alpha + z)) + r log((2 alpha + z)/z), r = n/T.
inline double contour_exponent(double z, double r, double alpha)
{
    return std::log((alpha + z) / (2.0 * alpha + z)) + r * std::log((2.0 * alpha + z) / z);
}

inline double contour_exponent_derivative(double z, double r, double alpha)
{
    return 1.0 / (alpha + z) - 1.0 / (2.0 * alpha + z) + r * (1.0 / (2.0 * alpha + z) - 1.0 / z);
}

struct CriticalPoint {
    double z0_asymptotic = 0.0; // 2 gamma / ((1 - 2 gamma) eps)
    double z0_numeric = 0.0;    // bisection root of f'
    double z0_exact = 0.0;      // 2 n alpha / (T - 2 n)
    double derivative_residual = 0.0;
    std::int64_t T = 0;
    std::int64_t n = 0;
    double alpha = 0.0;
    double t_eps = 0.0;
    double x_eps = 0.0;
};

inline CriticalPoint critical_point(double gamma, double eps, double t, double x)
{
    detail::require(eps > 0.0 && eps <= 0.2, "critical_point: eps must lie in (0, 0.2]");
    detail::require(t > 0.0, "critical_point: t must be > 0");
    const ScalingFrame frame = polymer_frame(gamma, eps);
    const PolymerPoint p = polymer_snap(frame, t, x);
    detail::require(p.T > 0 && p.n > 0, "critical_point: snapped point has T = 0 or n <= 0");
    CriticalPoint cp;
    cp.T = p.T;
    cp.n = p.n;
    cp.t_eps = p.t_eps;
    cp.x_eps = p.x_eps;
    cp.alpha = 1.0 / eps;
    cp.z0_asymptotic = 2.0 * gamma / ((1.0 - 2.0 * gamma) * eps);
    if (2 * p.n < p.T) cp.z0_exact = 2.0 * static_cast<double>(p.n) * cp.alpha / static_cast<double>(p.T - 2 * p.n);
    const double r = static_cast<double>(p.n) / static_cast<double>(p.T);

    double lo = 1e-12 * cp.z0_asymptotic;
    double hi = 4.0 * cp.z0_asymptotic;
    double flo = contour_exponent_derivative(lo, r, cp.alpha);
    const double fhi = contour_exponent_derivative(hi, r, cp.alpha);
    if (!(flo < 0.0 && fhi > 0.0))
        throw NumericalError("critical_point: f' does not change sign on (0, 4 z0) (f'(lo) = " + std::to_string(flo) + ", f'(hi) = " + std::to_string(fhi) + ")");
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = contour_exponent_derivative(mid, r, cp.alpha);
        if (fm == 0.0) {
            lo = hi = mid;
            break;
        }
        if (fm < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    const double fl = std::fabs(contour_exponent_derivative(lo, r, cp.alpha));
    const double fh = std::fabs(contour_exponent_derivative(hi, r, cp.alpha));
    cp.z0_numeric = fl <= fh ? lo : hi;
    cp.derivative_residual = std::min(fl, fh);
    return cp;
}

struct TaylorCheck {
    double z0 = 0.0;
    std::vector<double> deviations;
    double max_deviation = 0.0;
    double zeroth_order = 0.0;          // |f(z0) - (-I + 2 I' eps x_eps / t_eps)|
    double quadratic_coefficient = 0.0; // (1-2g)^4 eps^2 / (8 g (1-g))
    double fd_half_second = 0.0;        // centered second difference of f at z0, halved
};

// Compares f(z0 + zt) with its displayed second-order expansion around
// z0 = 2 gamma / ((1 - 2 gamma) eps).
inline TaylorCheck taylor_check(double gamma, double eps, double t, double x, std::span<const double> zt)
{
    detail::require(eps > 0.0, "taylor_check: eps must be > 0");
    for (double z : zt) detail::require(std::fabs(z) <= 0.1 / eps, "taylor_check: |z~| must be <= 1/(10 eps)");
    const ScalingFrame frame = polymer_frame(gamma, eps);
    const PolymerPoint p = polymer_snap(frame, t, x);
    detail::require(p.T > 0, "taylor_check: snapped time is 0");
    const double alpha = 1.0 / eps;
    const double r = static_cast<double>(p.n) / static_cast<double>(p.T);
    const RatePair rp = rate_pair(1.0 - 2.0 * gamma);
    const double q = 1.0 - 2.0 * gamma;
    const double g1 = gamma * (1.0 - gamma);
    const double c2 = q * q * q * q * eps * eps / (8.0 * g1);
    const double c1 = q * q * eps * eps * p.x_eps / (2.0 * g1 * p.t_eps);
    const double c0 = -rp.rate + 2.0 * rp.slope * eps * p.x_eps / p.t_eps;

    TaylorCheck out;
    out.z0 = 2.0 * gamma / (q * eps);
    out.quadratic_coefficient = c2;
    const double f0 = contour_exponent(out.z0, r, alpha);
    out.zeroth_order = std::fabs(f0 - c0);
    for (double z : zt) {
        const double dev = std::fabs(contour_exponent(out.z0 + z, r, alpha) - (c0 + c2 * z * z - c1 * z));
        out.deviations.push_back(dev);
        out.max_deviation = std::max(out.max_deviation, dev);
    }
    const double h = 1e-3 * out.z0;
    out.fd_half_second = (contour_exponent(out.z0 + h, r, alpha) - 2.0 * f0 + contour_exponent(out.z0 - h, r, alpha)) / (2.0 * h * h);
    return out;
}

struct MomentTableRow {
    double eps = 0.0;
    int k = 1;
    std::int64_t T = 0;
    std::vector<std::int64_t> n;
    double t_eps = 0.0;
    std::vector<double> x_eps;
    double rescaled_beta_moment = 0.0;
    double she_moment = 0.0;
    double ratio = 0.0;
    double imag_residual = 0.0;
};

struct MomentTableOptions {
    int circle_points = 1024;
    int line_points = 2048;
    bool closed_form = false; // k = 1 only: skip the contour
};

// Rescaled Beta-polymer moments with alpha = beta = 1/eps against the SHE
// moment evaluated at the snapped coordinates (t_eps, x_eps).
inline std::vector<MomentTableRow> moment_convergence_table(double gamma, double t, std::span<const double> xs, std::span<const double> eps_list,
                                                            const MomentTableOptions& opt = {})
{
    const std::size_t k = xs.size();
    detail::require(k == 1 || k == 2, "moment_convergence_table: k must be 1 or 2");
    detail::require(t > 0.0, "moment_convergence_table: t must be > 0");
    if (k == 2) detail::require(xs[0] >= xs[1], "moment_convergence_table: need x_1 >= x_2");
    if (opt.closed_form) detail::require(k == 1, "moment_convergence_table: closed form exists for k = 1 only");
    std::vector<MomentTableRow> rows;
    for (double eps : eps_list) {
        detail::require(eps > 0.0 && eps <= 0.5, "moment_convergence_table: eps must lie in (0, 0.5]");
        if (k == 2) detail::require(eps >= 0.05, "moment_convergence_table: k = 2 needs eps >= 0.05");
        const ScalingFrame frame = polymer_frame(gamma, eps);
        MomentTableRow row;
        row.eps = eps;
        row.k = static_cast<int>(k);
        std::vector<double> log_scale;
        for (double x : xs) {
            const PolymerPoint p = polymer_snap(frame, t, x);
            row.T = p.T;
            row.t_eps = p.t_eps;
            row.n.push_back(p.n);
            row.x_eps.push_back(p.x_eps);
            log_scale.push_back(polymer_log_prefactor(frame, p));
        }
        const double alpha = 1.0 / eps;
        if (opt.closed_form) {
            const double z = beta_moment_closed_form(row.T, row.n[0], alpha, alpha);
            row.rescaled_beta_moment = z > 0.0 ? std::exp(log_scale[0] + std::log(z)) : 0.0;
        } else {
            BetaMomentJob job;
            job.T = row.T;
            job.n = row.n;
            job.alpha = alpha;
            job.beta = alpha;
            job.log_scale = log_scale;
            const double z0 = 2.0 * gamma / ((1.0 - 2.0 * gamma) * eps);
            if (k == 1) {
                job.contours = {{cplx(0.0, 0.0), z0, opt.circle_points}};
            } else {
                job.contours = {{cplx(0.0, 0.0), z0 + 1.5, opt.circle_points}, {cplx(0.0, 0.0), z0, opt.circle_points}};
            }
            const MomentResult mr = beta_moment_contour(job);
            row.rescaled_beta_moment = mr.value;
            row.imag_residual = mr.imag_residual;
        }
        SheMomentJob sj;
        sj.t = row.t_eps;
        sj.x = row.x_eps;
        sj.gamma = gamma;
        sj.lines = default_she_lines(sj.t, sj.x, gamma, k == 1 ? 512 : opt.line_points);
        row.she_moment = she_moment_contour(sj).value;
        row.ratio = row.rescaled_beta_moment / row.she_moment;
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace kpzlab
