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

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "kpzlab/chaos.hpp"
#include "kpzlab/environment.hpp"
#include "kpzlab/errors.hpp"
#include "kpzlab/io.hpp"
#include "kpzlab/moments.hpp"
#include "kpzlab/philox.hpp"
#include "kpzlab/rwre_polymer.hpp"
#include "kpzlab/she.hpp"
#include "kpzlab/ssrw_ldp.hpp"
#include "kpzlab/stats.hpp"

#ifndef KPZLAB_VERSION
#define KPZLAB_VERSION "0.1.0"
#endif

namespace kpzlab {

inline constexpr const char* kVersion = KPZLAB_VERSION;

// What every driver hands back to the CLI. Nothing is written here; the caller
// renders and stores it only after the run finished.
struct RunOutput {
    json manifest;
    Table table;
    json summary;
    bool tolerance_ok = true;
};

class Stopwatch {
public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

private:
    std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

inline json make_manifest(const std::string& command, json config, json derived, std::uint64_t seed, double wall)
{
    json m = json::object();
    m["command"] = command;
    m["version"] = kVersion;
    m["seed"] = seed;
    m["config"] = std::move(config);
    m["derived"] = std::move(derived);
    m["wall_clock_seconds"] = wall;
    return m;
}

inline json stats_json(const SummaryStats& s)
{
    json j = json::object();
    j["n"] = s.n;
    j["mean"] = s.mean;
    j["variance"] = s.variance;
    j["stderr"] = optional_number(s.stderr_mean);
    j["min"] = s.min;
    j["max"] = s.max;
    return j;
}

namespace detail {
inline void check_eps_list(const std::vector<double>& eps)
{
    require(!eps.empty(), "epsilon list must not be empty");
    for (double e : eps) require(e > 0.0 && e <= 0.5, "epsilon values must lie in (0, 0.5]");
}
} // namespace detail

// ---------------------------------------------------------------- ldp-check

struct LdpConfig {
    double v = 0.5;
    double t = 1.0;
    double x = 0.0;
    int m1 = 0;
    int m2 = 0;
    std::vector<double> eps{0.2, 0.1, 0.05, 0.02};
    double tolerance = 0.05;
    bool require_monotone = true;
};

inline void validate(const LdpConfig& c)
{
    detail::require(c.v > 0.0 && c.v < 1.0, "ldp-check: v must lie in (0, 1)");
    detail::require(c.t > 0.0, "ldp-check: t must be > 0");
    detail::check_shift(c.m1, c.m2);
    detail::check_eps_list(c.eps);
}

struct LdpRow {
    double eps = 0.0;
    SnappedPoint snapped;
    double value = 0.0;
    double limit = 0.0;
    double rel_error = 0.0;
};

inline std::vector<LdpRow> ldp_table(const LdpConfig& c)
{
    validate(c);
    std::vector<LdpRow> rows;
    const double lim = ldp_limit(c.v, c.t, c.x, c.m1, c.m2);
    for (double e : c.eps) {
        LdpRow r;
        r.eps = e;
        const ScalingFrame f(e, c.v);
        r.snapped = snap(f, c.t, c.x);
        r.value = rescaled_ssrw({f, c.t, c.x, c.m1, c.m2});
        r.limit = lim;
        r.rel_error = std::fabs(r.value / lim - 1.0);
        rows.push_back(r);
    }
    return rows;
}

inline bool strictly_decreasing(const std::vector<double>& xs)
{
    for (std::size_t k = 1; k < xs.size(); ++k)
        if (!(xs[k] < xs[k - 1])) return false;
    return true;
}

inline RunOutput run_ldp_table(const LdpConfig& c)
{
    Stopwatch sw;
    const auto rows = ldp_table(c);
    RunOutput out;
    out.table.columns = {"epsilon", "i", "j", "t_eps", "x_eps", "rescaled", "limit", "ratio", "abs_rel_error"};
    std::vector<double> errs;
    json derived = json::array();
    for (const auto& r : rows) {
        out.table.rows.push_back({r.eps, r.snapped.point.i, r.snapped.point.j, r.snapped.t_eps, r.snapped.x_eps, r.value, r.limit, r.value / r.limit, r.rel_error});
        errs.push_back(r.rel_error);
        derived.push_back({{"epsilon", r.eps}, {"N", r.snapped.point.i}, {"j", r.snapped.point.j}});
    }
    const bool mono = strictly_decreasing(errs);
    const bool final_ok = errs.back() <= c.tolerance;
    out.tolerance_ok = final_ok && (mono || !c.require_monotone);
    out.summary = {{"final_abs_rel_error", errs.back()}, {"tolerance", c.tolerance}, {"monotone", mono}, {"pass", out.tolerance_ok}};
    json cfg = {{"v", c.v}, {"t", c.t}, {"x", c.x}, {"m1", c.m1}, {"m2", c.m2}, {"eps", c.eps}, {"tolerance", c.tolerance}, {"require_monotone", c.require_monotone}};
    out.manifest = make_manifest("ldp-check", cfg, derived, 0, sw.seconds());
    return out;
}

// ------------------------------------------------------------- chaos-verify

struct ChaosConfig {
    std::int64_t n = 8; // largest N; each trial draws N in 1..n
    std::uint64_t seed = 1;
    EnvKind dist = EnvKind::rademacher;
    double eps = 0.1;
    std::int64_t trials = 100;
    double tolerance = 1e-12;
    double poly_tolerance = 1e-13;
};

inline void validate(const ChaosConfig& c)
{
    detail::require(c.n >= 1 && c.n <= kMaxEnumerationN, "chaos-verify: n must lie in 1..8");
    detail::require(c.trials >= 1, "chaos-verify: trials must be >= 1");
    detail::require(c.eps > 0.0 && c.eps <= 0.5, "chaos-verify: eps must lie in (0, 0.5]");
    validate(EnvironmentSpec{c.dist, c.eps, c.seed, 1.0});
}

struct ChaosTrial {
    std::int64_t trial = 0;
    std::int64_t N = 0;
    std::int64_t y = 0;
    std::uint64_t env_seed = 0;
    double probability = 0.0;
    double residual = 0.0;
    double poly_rel_error = 0.0;
};

// Trial environments and endpoints are pure functions of (seed, trial).
inline ChaosTrial chaos_trial(const ChaosConfig& c, std::int64_t trial)
{
    ChaosTrial r;
    r.trial = trial;
    CounterStream pick(c.seed, static_cast<std::uint32_t>(trial), 0u, StreamTag::trial);
    r.N = 1 + static_cast<std::int64_t>(pick.next_u64() % static_cast<std::uint64_t>(c.n));
    r.y = -r.N + 2 * static_cast<std::int64_t>(pick.next_u64() % static_cast<std::uint64_t>(r.N + 1));
    r.env_seed = derive_seed(c.seed, static_cast<std::uint64_t>(trial), StreamTag::trial);
    const Environment env({c.dist, c.eps, r.env_seed, 1.0}, r.N + 1);
    r.probability = std::exp(rwre_log_transition(env, c.eps, r.N, r.y));
    r.residual = chaos_identity_residual(env, c.eps, r.N, r.y);
    const double poly = chaos_poly_dp(env, r.N, r.y).evaluate(std::sqrt(c.eps));
    r.poly_rel_error = r.probability > 0.0 ? std::fabs(poly / r.probability - 1.0) : std::fabs(poly);
    return r;
}

inline RunOutput run_chaos_verify(const ChaosConfig& c, unsigned threads = 1)
{
    validate(c);
    Stopwatch sw;
    const auto trials = parallel_map<ChaosTrial>(static_cast<std::size_t>(c.trials), threads,
                                                 [&](std::size_t k) { return chaos_trial(c, static_cast<std::int64_t>(k)); });
    RunOutput out;
    out.table.columns = {"trial", "N", "y", "env_seed", "probability", "residual", "poly_rel_error"};
    double max_res = 0.0;
    double max_poly = 0.0;
    for (const auto& r : trials) {
        out.table.rows.push_back({r.trial, r.N, r.y, std::to_string(r.env_seed), r.probability, r.residual, r.poly_rel_error});
        max_res = std::max(max_res, r.residual);
        max_poly = std::max(max_poly, r.poly_rel_error);
    }
    out.tolerance_ok = max_res <= c.tolerance && max_poly <= c.poly_tolerance;
    out.summary = {{"max_residual", max_res}, {"max_poly_rel_error", max_poly}, {"tolerance", c.tolerance}, {"poly_tolerance", c.poly_tolerance}, {"pass", out.tolerance_ok}};
    json cfg = {{"n", c.n}, {"seed", c.seed}, {"dist", std::string(to_string(c.dist))}, {"eps", c.eps}, {"trials", c.trials}, {"tolerance", c.tolerance}};
    out.manifest = make_manifest("chaos-verify", cfg, json::object(), c.seed, sw.seconds());
    return out;
}

// ---------------------------------------------------------------- law-check

inline RunOutput run_law_check(std::int64_t n, double eps)
{
    Stopwatch sw;
    const LawCheckResult r = time_reversal_law_check(n, eps);
    RunOutput out;
    out.table.columns = {"N", "x", "polymer_sites", "walk_sites", "atoms", "max_discrepancy", "equal"};
    for (const auto& row : r.rows)
        out.table.rows.push_back({r.N, row.x, row.polymer_sites, row.walk_sites, static_cast<std::int64_t>(row.atoms), row.max_discrepancy, row.equal});
    out.tolerance_ok = r.equal;
    out.summary = {{"equal", r.equal}, {"pass", r.equal}};
    out.manifest = make_manifest("law-check", {{"n", n}, {"eps", eps}}, json::object(), 0, sw.seconds());
    return out;
}

// ------------------------------------------------------------------ rwre-mc

struct RwreMcConfig {
    double v = 0.5;
    double t = 1.0;
    double x = 0.0;
    std::vector<double> eps{0.1};
    std::int64_t replicas = 1000;
    EnvKind dist = EnvKind::rademacher;
    std::uint64_t seed = 1;
    std::int64_t omega_samples = 100000;
};

inline void validate(const RwreMcConfig& c)
{
    detail::require(c.v > 0.0 && c.v < 1.0, "rwre-mc: v must lie in (0, 1)");
    detail::require(c.t > 0.0, "rwre-mc: t must be > 0");
    detail::require(c.replicas >= 1, "rwre-mc: replicas must be >= 1");
    detail::require(c.omega_samples >= 1000, "rwre-mc: omega samples must be >= 1000");
    detail::check_eps_list(c.eps);
    for (double e : c.eps) validate(EnvironmentSpec{c.dist, e, c.seed, 1.0});
}

struct RwreMcSummary {
    double eps = 0.0;
    SnappedPoint snapped;
    SummaryStats value;
    SummaryStats second;
    SummaryStats height;
    double exact_mean = 0.0;     // rescaled SSRW at the same eps
    double limit_mean = 0.0;     // heat_solution(v, t, x)
    double sigma = 0.0;          // measured sqrt(2 E omega^2)
    double second_target = 0.0;  // second-moment series with the measured sigma
};

struct RwreMcResult {
    std::vector<RwreMcSummary> summaries;
    std::vector<std::vector<RescaledValue>> values; // [eps index][replica]
};

inline std::uint64_t replica_seed(std::uint64_t seed, std::size_t eps_index, std::size_t replica)
{
    return derive_seed(seed, (static_cast<std::uint64_t>(eps_index) << 40) | replica, StreamTag::replica_seed);
}

inline RwreMcResult rwre_mc(const RwreMcConfig& c, unsigned threads = 1)
{
    validate(c);
    RwreMcResult res;
    for (std::size_t ei = 0; ei < c.eps.size(); ++ei) {
        const double e = c.eps[ei];
        const ScalingFrame frame(e, c.v);
        const SnappedPoint sp = snap(frame, c.t, c.x);
        const std::int64_t n_max = sp.point.i + 1;
        auto vals = parallel_map<RescaledValue>(static_cast<std::size_t>(c.replicas), threads, [&](std::size_t r) {
            const Environment env({c.dist, e, replica_seed(c.seed, ei, r), 1.0}, n_max);
            return rescaled_rwre(env, frame, c.t, c.x);
        });
        std::vector<double> v1;
        std::vector<double> v2;
        std::vector<double> h;
        for (const auto& rv : vals) {
            v1.push_back(rv.value);
            v2.push_back(rv.value * rv.value);
            if (rv.log_value != kNegInf) h.push_back(rv.log_value);
        }
        RwreMcSummary s;
        s.eps = e;
        s.snapped = sp;
        s.value = summarize(v1);
        s.second = summarize(v2);
        s.height = summarize(h);
        s.exact_mean = rescaled_ssrw({frame, c.t, c.x, 0, 0});
        s.limit_mean = heat_solution(c.v, c.t, c.x);
        const OmegaStats os = omega_stats({c.dist, e, c.seed, 1.0}, c.omega_samples, derive_seed(c.seed, ei, StreamTag::environment));
        s.sigma = os.sigma;
        s.second_target = she_second_moment_series(c.v, s.sigma, c.t, c.x, 60);
        res.summaries.push_back(s);
        res.values.push_back(std::move(vals));
    }
    return res;
}

inline RunOutput run_rwre_mc(const RwreMcConfig& c, unsigned threads = 1)
{
    Stopwatch sw;
    const RwreMcResult res = rwre_mc(c, threads);
    RunOutput out;
    out.table.columns = {"epsilon", "replica", "value", "log_value"};
    json summary = json::array();
    json derived = json::array();
    for (std::size_t ei = 0; ei < res.summaries.size(); ++ei) {
        const auto& s = res.summaries[ei];
        for (std::size_t r = 0; r < res.values[ei].size(); ++r) {
            const auto& rv = res.values[ei][r];
            out.table.rows.push_back({s.eps, static_cast<std::int64_t>(r), rv.value, rv.log_value == kNegInf ? Cell{} : Cell{rv.log_value}});
        }
        summary.push_back({{"epsilon", s.eps},
                           {"value", stats_json(s.value)},
                           {"second_moment", stats_json(s.second)},
                           {"log_value", stats_json(s.height)},
                           {"exact_mean_same_eps", s.exact_mean},
                           {"heat_solution", s.limit_mean},
                           {"sigma", s.sigma},
                           {"second_moment_series", s.second_target}});
        derived.push_back({{"epsilon", s.eps}, {"N", s.snapped.point.i}, {"j", s.snapped.point.j}, {"t_eps", s.snapped.t_eps}, {"x_eps", s.snapped.x_eps}});
    }
    out.summary = summary;
    json cfg = {{"v", c.v}, {"t", c.t}, {"x", c.x}, {"eps", c.eps}, {"replicas", c.replicas}, {"dist", std::string(to_string(c.dist))}, {"seed", c.seed}};
    out.manifest = make_manifest("rwre-mc", cfg, derived, c.seed, sw.seconds());
    return out;
}

// ---------------------------------------------------------------- she-solve

struct SheConfig {
    double v = 0.5;
    double sigma = 1.4142135623730951;
    double t = 0.5;
    double x = 0.0;
    SheGridParams grid{0.01, 4.0, 1.25};
    std::int64_t replicas = 100;
    std::uint64_t seed = 1;
};

inline void validate(const SheConfig& c)
{
    detail::require(c.replicas >= 1, "she-solve: replicas must be >= 1");
    detail::require(c.t > 0.0, "she-solve: t must be > 0");
    detail::require(c.sigma >= 0.0, "she-solve: sigma must be >= 0");
    detail::require(std::fabs(c.x) <= c.grid.half_width, "she-solve: x outside the grid");
}

struct SheReplica {
    double value = 0.0;
    double mass = 0.0;
    double boundary_fraction = 0.0;
};

struct SheMcResult {
    std::vector<SheReplica> replicas;
    SummaryStats value;
    SummaryStats second;
    SummaryStats mass;
    std::int64_t n_steps = 0;
    double dt = 0.0;
    std::int64_t leaks = 0;
};

inline SheMcResult she_mc(const SheConfig& c, unsigned threads = 1)
{
    validate(c);
    SheMcResult res;
    detail::require(c.grid.safety >= 1.25, "she-solve: unstable step, safety factor must be >= 1.25");
    res.replicas = parallel_map<SheReplica>(static_cast<std::size_t>(c.replicas), threads, [&](std::size_t r) {
        const FieldGrid fg = she_solve(c.v, c.sigma, c.t, c.grid, c.seed, r);
        return SheReplica{fg.value_at(c.x), fg.mass(), fg.max_boundary_fraction};
    });
    std::vector<double> v1;
    std::vector<double> v2;
    std::vector<double> m;
    for (const auto& r : res.replicas) {
        v1.push_back(r.value);
        v2.push_back(r.value * r.value);
        m.push_back(r.mass);
        if (r.boundary_fraction > kBoundaryLeakTolerance) ++res.leaks;
    }
    res.value = summarize(v1);
    res.second = summarize(v2);
    res.mass = summarize(m);
    const double a = 1.0 - c.v * c.v;
    const double dt_max = c.grid.dx * c.grid.dx / (2.0 * a * c.grid.safety);
    res.n_steps = static_cast<std::int64_t>(std::ceil(c.t / dt_max));
    res.dt = c.t / static_cast<double>(res.n_steps);
    return res;
}

inline RunOutput run_she(const SheConfig& c, unsigned threads = 1)
{
    Stopwatch sw;
    const SheMcResult res = she_mc(c, threads);
    RunOutput out;
    out.table.columns = {"replica", "value", "mass", "boundary_fraction"};
    for (std::size_t r = 0; r < res.replicas.size(); ++r)
        out.table.rows.push_back({static_cast<std::int64_t>(r), res.replicas[r].value, res.replicas[r].mass, res.replicas[r].boundary_fraction});
    out.summary = {{"value", stats_json(res.value)},
                   {"second_moment", stats_json(res.second)},
                   {"mass", stats_json(res.mass)},
                   {"heat_solution", heat_solution(c.v, c.t, c.x)},
                   {"second_moment_series", she_second_moment_series(c.v, c.sigma, c.t, c.x, 60)},
                   {"boundary_leaks", res.leaks}};
    json cfg = {{"v", c.v}, {"sigma", c.sigma}, {"t", c.t}, {"x", c.x}, {"dx", c.grid.dx}, {"half_width", c.grid.half_width},
                {"safety", c.grid.safety}, {"replicas", c.replicas}, {"seed", c.seed}};
    out.manifest = make_manifest("she-solve", cfg, {{"n_steps", res.n_steps}, {"dt", res.dt}}, c.seed, sw.seconds());
    return out;
}

// ------------------------------------------------------------------ moments

struct MomentsConfig {
    double gamma = 0.25;
    double t = 1.0;
    std::vector<double> x{0.0};
    std::vector<double> eps{0.2, 0.1, 0.05};
    MomentTableOptions options;
};

inline RunOutput run_moment_table(const MomentsConfig& c)
{
    Stopwatch sw;
    const auto rows = moment_convergence_table(c.gamma, c.t, c.x, c.eps, c.options);
    RunOutput out;
    out.table.columns = {"epsilon", "k", "T", "n1", "n2", "rescaled_beta_moment", "she_moment", "ratio", "imag_residual"};
    bool real_ok = true;
    json derived = json::array();
    for (const auto& r : rows) {
        out.table.rows.push_back({r.eps, static_cast<std::int64_t>(r.k), r.T, r.n[0], r.n.size() > 1 ? Cell{r.n[1]} : Cell{}, r.rescaled_beta_moment, r.she_moment,
                                  r.ratio, r.imag_residual});
        real_ok = real_ok && r.imag_residual <= 1e-8 * std::fabs(r.rescaled_beta_moment);
        derived.push_back({{"epsilon", r.eps}, {"T", r.T}, {"n", r.n}, {"t_eps", r.t_eps}, {"x_eps", r.x_eps}});
    }
    out.tolerance_ok = real_ok;
    out.summary = {{"final_abs_ratio_error", std::fabs(rows.back().ratio - 1.0)}, {"real", real_ok}};
    json cfg = {{"k", c.x.size()}, {"gamma", c.gamma}, {"t", c.t}, {"x", c.x}, {"eps", c.eps}, {"quad_points", c.options.circle_points},
                {"closed_form", c.options.closed_form}};
    out.manifest = make_manifest("moments", cfg, derived, 0, sw.seconds());
    return out;
}

// ----------------------------------------------------------- critical-point

struct CriticalConfig {
    double gamma = 0.25;
    double eps = 0.1;
    double t = 1.0;
    double x = 0.0;
    double residual_tolerance = 1e-12;
};

inline RunOutput run_critical_point(const CriticalConfig& c)
{
    Stopwatch sw;
    const CriticalPoint cp = critical_point(c.gamma, c.eps, c.t, c.x);
    const double s = 0.1 / c.eps;
    const std::vector<double> grid{-s, -0.5 * s, 0.0, 0.5 * s, s};
    const TaylorCheck tc = taylor_check(c.gamma, c.eps, c.t, c.x, grid);
    RunOutput out;
    out.table.columns = {"T", "n", "z0_asymptotic", "z0_numeric", "z0_exact", "derivative_residual", "zeroth_order_deviation", "quadratic_coefficient",
                         "fd_half_second_derivative", "max_taylor_deviation"};
    out.table.rows.push_back({cp.T, cp.n, cp.z0_asymptotic, cp.z0_numeric, cp.z0_exact, cp.derivative_residual, tc.zeroth_order, tc.quadratic_coefficient,
                              tc.fd_half_second, tc.max_deviation});
    out.tolerance_ok = cp.derivative_residual <= c.residual_tolerance;
    out.summary = {{"derivative_residual", cp.derivative_residual}, {"tolerance", c.residual_tolerance}, {"pass", out.tolerance_ok}};
    json cfg = {{"gamma", c.gamma}, {"eps", c.eps}, {"t", c.t}, {"x", c.x}};
    out.manifest = make_manifest("critical-point", cfg, {{"T", cp.T}, {"n", cp.n}, {"t_eps", cp.t_eps}, {"x_eps", cp.x_eps}}, 0, sw.seconds());
    return out;
}

} // namespace kpzlab
