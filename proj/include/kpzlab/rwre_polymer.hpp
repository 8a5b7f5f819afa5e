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
#include <concepts>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "kpzlab/environment.hpp"
#include "kpzlab/errors.hpp"
#include "kpzlab/log_domain.hpp"
#include "kpzlab/scaling.hpp"
#include "kpzlab/ssrw_ldp.hpp"

namespace kpzlab {

template <class F>
concept OmegaField = requires(const F& f, std::int64_t i, std::int64_t j) {
    { f.omega(i, j) } -> std::convertible_to<double>;
};

template <class F>
concept WeightField = requires(const F& f, std::int64_t i, std::int64_t j) {
    { f.weight(i, j) } -> std::convertible_to<double>;
};

// One time slice in log domain. values[k] sits at coordinate first + k*stride;
// RWRE rows use stride 2 over {-n, ..., n}, polymer rows stride 1 over {1, ..., n+1}.
struct LogProbRow {
    std::int64_t n = 0;
    std::int64_t first = 0;
    std::int64_t stride = 2;
    std::vector<double> values;

    std::int64_t coord(std::size_t k) const noexcept { return first + static_cast<std::int64_t>(k) * stride; }

    double at(std::int64_t j) const noexcept
    {
        const std::int64_t d = j - first;
        if (d < 0 || d % stride != 0) return kNegInf;
        const auto k = static_cast<std::size_t>(d / stride);
        return k < values.size() ? values[k] : kNegInf;
    }

    double log_mass() const noexcept { return log_sum_exp(values); }
};

namespace detail {

// log((1 + a w)/2) and log((1 - a w)/2), rejecting probabilities outside [0, 1].
inline std::pair<double, double> log_jump_probs(double a, double w, std::int64_t i, std::int64_t j)
{
    const double s = a * w;
    if (!(s >= -1.0 && s <= 1.0))
        throw ConfigError("site (" + std::to_string(i) + ", " + std::to_string(j) + ") has jump probability outside [0, 1]");
    return {std::log1p(s) - std::numbers::ln2, std::log1p(-s) - std::numbers::ln2};
}

// Forward recursion restricted to sites that can still reach `target` at time
// N; with no target the whole cone is kept.
template <OmegaField F>
LogProbRow evolve_window(const F& field, double eps, std::int64_t N, const std::int64_t* target)
{
    require(N >= 0, "evolve_rwre: N must be >= 0");
    require(eps >= 0.0, "evolve_rwre: epsilon must be >= 0");
    const double a = std::sqrt(eps);
    std::vector<double> cur(static_cast<std::size_t>(N) + 1, kNegInf);
    std::vector<double> nxt(cur.size(), kNegInf);
    std::vector<double> up(cur.size());
    std::vector<double> down(cur.size());
    cur[0] = 0.0;

    auto lo_at = [&](std::int64_t n) { return target ? std::max(-n, *target - (N - n)) : -n; };
    auto hi_at = [&](std::int64_t n) { return target ? std::min(n, *target + (N - n)) : n; };

    for (std::int64_t n = 0; n < N; ++n) {
        const std::int64_t lo = lo_at(n);
        const std::int64_t hi = hi_at(n);
        for (std::int64_t j = lo; j <= hi; j += 2) {
            const auto k = static_cast<std::size_t>((j + n) / 2);
            const auto [lu, ld] = log_jump_probs(a, field.omega(n, j), n, j);
            up[k] = cur[k] + lu;
            down[k] = cur[k] + ld;
        }
        const std::int64_t lo1 = lo_at(n + 1);
        const std::int64_t hi1 = hi_at(n + 1);
        std::fill(nxt.begin(), nxt.begin() + n + 2, kNegInf);
        for (std::int64_t y = lo1; y <= hi1; y += 2) {
            const auto k = static_cast<std::size_t>((y + n + 1) / 2);
            // y is reached from y-1 (old index k-1) going up or from y+1 (old index k) going down
            const double from_below = (y - 1 >= lo && y - 1 <= hi) ? up[k - 1] : kNegInf;
            const double from_above = (y + 1 >= lo && y + 1 <= hi) ? down[k] : kNegInf;
            nxt[k] = log_add(from_below, from_above);
        }
        std::swap(cur, nxt);
    }
    LogProbRow row;
    row.n = N;
    row.first = -N;
    row.stride = 2;
    row.values = std::move(cur);
    if (target) {
        const double keep = row.at(*target);
        std::fill(row.values.begin(), row.values.end(), kNegInf);
        if (*target >= -N && *target <= N && ((*target + N) % 2 == 0)) row.values[static_cast<std::size_t>((*target + N) / 2)] = keep;
    }
    return row;
}

} // namespace detail

// Row of log P(S_N = j) for the walk with up-probability (1 + sqrt(eps) w_{n,j})/2.
template <OmegaField F>
LogProbRow evolve_rwre(const F& field, double eps, std::int64_t N)
{
    return detail::evolve_window(field, eps, N, nullptr);
}

template <OmegaField F>
LogProbRow evolve_rwre(const F& field, const ScalingFrame& frame, std::int64_t N)
{
    return evolve_rwre(field, frame.eps(), N);
}

inline LogProbRow evolve_rwre(const Environment& env, const ScalingFrame& frame, std::int64_t N)
{
    detail::require(N <= env.n_max(), "evolve_rwre: N exceeds environment n_max");
    return evolve_rwre<Environment>(env, frame.eps(), N);
}

// log P(S_N = y) alone; only sites that can still reach y are visited.
template <OmegaField F>
double rwre_log_transition(const F& field, double eps, std::int64_t N, std::int64_t y)
{
    if (y < -N || y > N || ((y + N) % 2) != 0) return kNegInf;
    return detail::evolve_window(field, eps, N, &y).at(y);
}

struct RescaledValue {
    double value = 0.0;
    double log_value = kNegInf; // Hopf-Cole height
    SnappedPoint snapped;
};

template <OmegaField F>
RescaledValue rescaled_rwre(const F& field, const ScalingFrame& frame, double t, double x)
{
    detail::require(t > 0.0, "rescaled_rwre: t must be > 0");
    const SnappedPoint s = snap(frame, t, x);
    const std::int64_t N = s.point.i;
    const std::int64_t y = s.point.j;
    if constexpr (std::same_as<F, Environment>)
        detail::require(N <= field.n_max(), "rescaled_rwre: time exceeds environment n_max");
    const double lp = rwre_log_transition(field, frame.eps(), N, y);
    RescaledValue out;
    out.snapped = s;
    if (lp == kNegInf) return out;
    const RatePair r = rate_pair(frame.v());
    const double drift = static_cast<double>(y) - frame.v() * static_cast<double>(N);
    out.log_value = -std::log(frame.eps()) + static_cast<double>(N) * r.rate + drift * r.slope + lp;
    out.value = std::exp(out.log_value);
    return out;
}

// log E[P(S_N = y)^2] for i.i.d. disorder with mean 0 and E omega^2 = m2.
// Two walks share the environment: on different sites they step
// independently, on a shared site the joint moves up/up and down/down carry
// (1 + eps m2)/4 and the split moves (1 - eps m2)/4.
inline double rwre_log_annealed_second_moment(double eps, double m2, std::int64_t N, std::int64_t y)
{
    detail::require(eps > 0.0 && m2 >= 0.0 && eps * m2 <= 1.0, "annealed second moment: need eps > 0 and 0 <= eps m2 <= 1");
    detail::require(N >= 0, "annealed second moment: N must be >= 0");
    if (y < -N || y > N || ((y + N) % 2) != 0) return kNegInf;
    const std::size_t W = static_cast<std::size_t>(N) + 1;
    // q[k1 W + k2]: walks at j = -n + 2 k1 and -n + 2 k2
    std::vector<double> q(W * W, 0.0);
    std::vector<double> r(W * W, 0.0);
    q[0] = 1.0;
    const double same = 0.25 * (1.0 + eps * m2);
    const double split = 0.25 * (1.0 - eps * m2);
    double log_scale = 0.0;
    for (std::int64_t n = 0; n < N; ++n) {
        const std::size_t m = static_cast<std::size_t>(n) + 1;
        std::fill(r.begin(), r.end(), 0.0);
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = 0; b < m; ++b) {
                const double v = q[a * W + b];
                if (v == 0.0) continue;
                const double s = a == b ? same : 0.25;
                const double d = a == b ? split : 0.25;
                r[(a + 1) * W + b + 1] += s * v;
                r[a * W + b] += s * v;
                r[(a + 1) * W + b] += d * v;
                r[a * W + b + 1] += d * v;
            }
        }
        std::swap(q, r);
        double mx = 0.0;
        for (std::size_t a = 0; a <= m; ++a)
            for (std::size_t b = 0; b <= m; ++b) mx = std::max(mx, q[a * W + b]);
        for (double& v : q) v /= mx;
        log_scale += std::log(mx);
    }
    const std::size_t k = static_cast<std::size_t>((y + N) / 2);
    const double v = q[k * W + k];
    return v > 0.0 ? log_scale + std::log(v) : kNegInf;
}

// E[rescaled_rwre^2] at the snapped point, exact over the environment law.
inline double rescaled_rwre_second_moment(const ScalingFrame& frame, double m2, double t, double x)
{
    detail::require(t > 0.0, "rescaled second moment: t must be > 0");
    const SnappedPoint s = snap(frame, t, x);
    const double le = rwre_log_annealed_second_moment(frame.eps(), m2, s.point.i, s.point.j);
    if (le == kNegInf) return 0.0;
    const RatePair rp = rate_pair(frame.v());
    const double drift = static_cast<double>(s.point.j) - frame.v() * static_cast<double>(s.point.i);
    const double lpre = -std::log(frame.eps()) + static_cast<double>(s.point.i) * rp.rate + drift * rp.slope;
    return std::exp(2.0 * lpre + le);
}

namespace detail {
inline std::pair<double, double> log_weight_pair(double b, std::int64_t i, std::int64_t x)
{
    if (!(b >= 0.0 && b <= 1.0))
        throw ConfigError("polymer weight at (" + std::to_string(i) + ", " + std::to_string(x) + ") outside [0, 1]");
    return {std::log(b), std::log1p(-b)};
}
} // namespace detail

// Z(N, x) for x = 1..N+1 from Z(0, .) = 1{x = 1}:
// Z(N, x) = Z(N-1, x) B_{N,x} + Z(N-1, x-1) (1 - B_{N,x}).
template <WeightField F>
LogProbRow polymer_evolve(const F& field, std::int64_t N)
{
    detail::require(N >= 0, "polymer_evolve: N must be >= 0");
    std::vector<double> z(static_cast<std::size_t>(N) + 1, kNegInf);
    z[0] = 0.0;
    for (std::int64_t m = 1; m <= N; ++m) {
        // in place, right to left: index k holds x = k + 1
        for (std::int64_t x = m + 1; x >= 1; --x) {
            const auto [lb, l1b] = detail::log_weight_pair(field.weight(m, x), m, x);
            const auto k = static_cast<std::size_t>(x - 1);
            const double stay = x <= m ? z[k] + lb : kNegInf;
            const double move = x >= 2 ? z[k - 1] + l1b : kNegInf;
            z[k] = log_add(stay, move);
        }
    }
    LogProbRow row;
    row.n = N;
    row.first = 1;
    row.stride = 1;
    row.values = std::move(z);
    return row;
}

struct PolymerMass {
    double log_total = kNegInf;       // log of the summed weight over all start vertices (y at time 0)
    double log_from_origin = kNegInf; // the start vertex y = 1 alone, i.e. log Z(N, x)
};

// Backward recursion from the single endpoint (N, x). Weights entering each
// vertex sum to one, so the total over start vertices is exactly 1.
template <WeightField F>
PolymerMass polymer_start_mass(const F& field, std::int64_t N, std::int64_t x)
{
    detail::require(N >= 0, "polymer_start_mass: N must be >= 0");
    // w[k] holds vertex y = x - N + k at the current level, k = 0..N
    std::vector<double> w(static_cast<std::size_t>(N) + 1, kNegInf);
    w[static_cast<std::size_t>(N)] = 0.0;
    for (std::int64_t i = N; i >= 1; --i) {
        // W(i-1, y) = W(i, y) B_{i,y} + W(i, y+1) (1 - B_{i,y+1})
        for (std::int64_t k = 0; k <= N; ++k) {
            const std::int64_t y = x - N + k;
            double a = kNegInf;
            if (w[static_cast<std::size_t>(k)] != kNegInf) a = w[static_cast<std::size_t>(k)] + detail::log_weight_pair(field.weight(i, y), i, y).first;
            double b = kNegInf;
            if (k + 1 <= N && w[static_cast<std::size_t>(k + 1)] != kNegInf)
                b = w[static_cast<std::size_t>(k + 1)] + detail::log_weight_pair(field.weight(i, y + 1), i, y + 1).second;
            w[static_cast<std::size_t>(k)] = log_add(a, b);
        }
    }
    PolymerMass out;
    out.log_total = log_sum_exp(w);
    const std::int64_t k1 = 1 - (x - N);
    if (k1 >= 0 && k1 <= N) out.log_from_origin = w[static_cast<std::size_t>(k1)];
    return out;
}

// Walk-frame coordinates for the polymer with drift gamma. The point
// (t, -2x) is snapped in the frame with v = 1 - 2 gamma to (i, j); then
// T = i, n = (i - j)/2 = gamma T + x_eps/eps with x_eps = -(j - v i) eps / 2.
struct PolymerPoint {
    std::int64_t T = 0;
    std::int64_t n = 0;
    double t_eps = 0.0;
    double x_eps = 0.0;
    LatticePoint walk_point; // (i, j) in the walk frame
};

inline PolymerPoint polymer_snap(const ScalingFrame& frame, double t, double x)
{
    const SnappedPoint s = snap(frame, t, -2.0 * x);
    PolymerPoint p;
    p.T = s.point.i;
    p.n = (s.point.i - s.point.j) / 2;
    p.t_eps = s.t_eps;
    p.x_eps = -0.5 * s.x_eps + 0.0; // no negative zero
    p.walk_point = s.point;
    return p;
}

inline ScalingFrame polymer_frame(double gamma, double eps)
{
    detail::require(gamma > 0.0 && gamma < 0.5, "polymer: gamma must lie in (0, 1/2)");
    return ScalingFrame(eps, 1.0 - 2.0 * gamma);
}

// log of (1/eps) exp[T I(v) - 2 (x_eps/eps) I'(v)] without the partition function.
inline double polymer_log_prefactor(const ScalingFrame& frame, const PolymerPoint& p)
{
    const RatePair r = rate_pair(frame.v());
    const double drift = static_cast<double>(p.walk_point.j) - frame.v() * static_cast<double>(p.walk_point.i);
    return -std::log(frame.eps()) + static_cast<double>(p.T) * r.rate + drift * r.slope;
}

struct RescaledPolymer {
    double value = 0.0;
    double log_value = kNegInf;
    PolymerPoint point;
};

template <WeightField F>
RescaledPolymer rescaled_polymer(const F& field, const ScalingFrame& frame, double t, double x)
{
    detail::require(t > 0.0, "rescaled_polymer: t must be > 0");
    RescaledPolymer out;
    out.point = polymer_snap(frame, t, x);
    const PolymerPoint& p = out.point;
    if constexpr (std::same_as<F, Environment>)
        detail::require(p.T + 1 < field.n_max(), "rescaled_polymer: time exceeds environment n_max");
    if (p.n < 1 || p.n > p.T + 1) return out;
    const double lz = polymer_evolve(field, p.T).at(p.n);
    if (lz == kNegInf) return out;
    out.log_value = polymer_log_prefactor(frame, p) + lz;
    out.value = std::exp(out.log_value);
    return out;
}

struct LawCheckRow {
    std::int64_t x = 0;
    std::int64_t polymer_sites = 0;
    std::int64_t walk_sites = 0;
    std::size_t atoms = 0;        // distinct values after merging
    double max_discrepancy = 0.0; // largest |value| or |probability| mismatch between atoms
    bool equal = false;
};

struct LawCheckResult {
    std::int64_t N = 0;
    double eps = 0.25;
    std::vector<LawCheckRow> rows;
    bool equal = false;
};

namespace detail {

struct SiteMapField {
    std::map<std::pair<std::int64_t, std::int64_t>, double> w;
    double default_omega = 0.0;
    double sqrt_eps = 0.5;

    double omega(std::int64_t i, std::int64_t j) const
    {
        const auto it = w.find({i, j});
        return it == w.end() ? default_omega : it->second;
    }
    double weight(std::int64_t i, std::int64_t j) const { return 0.5 * (1.0 + sqrt_eps * omega(i, j)); }
};

// (value, probability) atoms, merged when values agree to `tol`.
inline std::vector<std::pair<double, double>> merge_atoms(std::vector<double> values, double tol)
{
    std::sort(values.begin(), values.end());
    const double p = 1.0 / static_cast<double>(values.size());
    std::vector<std::pair<double, double>> atoms;
    for (double v : values) {
        if (!atoms.empty() && v - atoms.back().first <= tol)
            atoms.back().second += p;
        else
            atoms.push_back({v, p});
    }
    return atoms;
}

template <class Eval>
std::vector<double> enumerate_rademacher(const std::vector<std::pair<std::int64_t, std::int64_t>>& sites, double sqrt_eps, Eval eval)
{
    std::vector<double> out;
    const std::uint64_t count = std::uint64_t{1} << sites.size();
    out.reserve(count);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        SiteMapField f;
        f.sqrt_eps = sqrt_eps;
        for (std::size_t s = 0; s < sites.size(); ++s) f.w[sites[s]] = ((mask >> s) & 1u) ? 1.0 : -1.0;
        out.push_back(eval(f));
    }
    return out;
}

} // namespace detail

// Exhaustive check that Z(N, x) and P(S_N = N - 2x + 2) have the same law
// under Rademacher disorder, for every x = 1..N+1.
inline LawCheckResult time_reversal_law_check(std::int64_t N, double eps = 0.25, double tol = 1e-12)
{
    detail::require(N >= 1 && N <= 4, "time_reversal_law_check: N must lie in 1..4");
    detail::require(eps > 0.0 && eps <= 1.0, "time_reversal_law_check: eps must lie in (0, 1]");
    const double a = std::sqrt(eps);
    LawCheckResult res;
    res.N = N;
    res.eps = eps;
    res.equal = true;
    for (std::int64_t x = 1; x <= N + 1; ++x) {
        // polymer vertices whose weights enter Z(N, x): paths (0,1) -> (N,x)
        std::vector<std::pair<std::int64_t, std::int64_t>> psites;
        for (std::int64_t i = 1; i <= N; ++i)
            for (std::int64_t y = std::max<std::int64_t>(1, x - (N - i)); y <= std::min(i + 1, x); ++y) psites.push_back({i, y});
        // walk sites departed from on paths 0 -> y at time N
        const std::int64_t y = N - 2 * x + 2;
        std::vector<std::pair<std::int64_t, std::int64_t>> wsites;
        for (std::int64_t n = 0; n < N; ++n)
            for (std::int64_t j = std::max(-n, y - (N - n)); j <= std::min(n, y + (N - n)); j += 2) wsites.push_back({n, j});

        auto zs = detail::enumerate_rademacher(psites, a, [&](const detail::SiteMapField& f) { return std::exp(polymer_evolve(f, N).at(x)); });
        auto ps = detail::enumerate_rademacher(wsites, a, [&](const detail::SiteMapField& f) { return std::exp(rwre_log_transition(f, eps, N, y)); });
        const auto za = detail::merge_atoms(std::move(zs), tol);
        const auto pa = detail::merge_atoms(std::move(ps), tol);

        LawCheckRow row;
        row.x = x;
        row.polymer_sites = static_cast<std::int64_t>(psites.size());
        row.walk_sites = static_cast<std::int64_t>(wsites.size());
        row.atoms = za.size();
        row.equal = za.size() == pa.size();
        if (row.equal) {
            for (std::size_t k = 0; k < za.size(); ++k) {
                row.max_discrepancy = std::max({row.max_discrepancy, std::fabs(za[k].first - pa[k].first), std::fabs(za[k].second - pa[k].second)});
            }
            row.equal = row.max_discrepancy <= tol;
        } else {
            row.max_discrepancy = 1.0;
        }
        res.equal = res.equal && row.equal;
        res.rows.push_back(row);
    }
    return res;
}

} // namespace kpzlab
