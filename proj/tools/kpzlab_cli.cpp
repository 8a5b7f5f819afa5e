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


// kpzlab command line: thin wrappers over the drivers in harness.hpp.
// Exit codes: 0 ok, 1 bad configuration, 2 tolerance or numerical failure.

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kpzlab/harness.hpp"

namespace {

using namespace kpzlab;

struct Common {
    std::string out;
    std::string format = "csv";
    unsigned threads = 1;
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--out", c.out, "output file (stdout when empty)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", c.threads, "worker cap")->check(CLI::Range(1u, 1024u));
}

std::uint64_t default_seed()
{
    const char* s = std::getenv("KPZLAB_SEED");
    if (s == nullptr || *s == '\0') return 1;
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(s, &used, 0);
        if (used != std::string(s).size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("KPZLAB_SEED is not an unsigned integer");
    }
}

EnvKind parse_dist(const std::string& s) { return env_kind_from_string(s); }

int emit(const RunOutput& r, const Common& c)
{
    const std::string text = c.format == "json" ? render_json(r.manifest, r.summary, r.table) : render_csv(r.manifest, r.summary, r.table);
    if (c.out.empty())
        std::cout << text << std::flush;
    else
        write_file_atomically(c.out, text);
    if (!r.tolerance_ok) {
        std::cerr << "kpzlab: tolerance check failed\n";
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"kpzlab: weak-disorder random walks, polymers and the stochastic heat equation"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    bool seed_given = false;
    std::function<RunOutput()> job;
    Common common;

    // ldp-check
    LdpConfig ldp;
    auto* c_ldp = app.add_subcommand("ldp-check", "sharp large deviation table for the rescaled SSRW");
    c_ldp->add_option("--v", ldp.v);
    c_ldp->add_option("--t", ldp.t);
    c_ldp->add_option("--x", ldp.x);
    c_ldp->add_option("--m1", ldp.m1);
    c_ldp->add_option("--m2", ldp.m2);
    c_ldp->add_option("--eps", ldp.eps)->delimiter(',');
    c_ldp->add_option("--tol", ldp.tolerance, "relative error allowed at the smallest eps");
    add_common(c_ldp, common);
    c_ldp->callback([&] { job = [&] { return run_ldp_table(ldp); }; });

    // chaos-verify
    ChaosConfig chaos;
    std::string chaos_dist = "rademacher";
    auto* c_chaos = app.add_subcommand("chaos-verify", "transition probability against its polynomial chaos");
    c_chaos->add_option("--n", chaos.n);
    c_chaos->add_option("--seed", seed)->each([&](const std::string&) { seed_given = true; });
    c_chaos->add_option("--dist", chaos_dist);
    c_chaos->add_option("--eps", chaos.eps);
    c_chaos->add_option("--trials", chaos.trials);
    c_chaos->add_option("--tol", chaos.tolerance);
    add_common(c_chaos, common);
    c_chaos->callback([&] {
        job = [&] {
            chaos.dist = parse_dist(chaos_dist);
            chaos.seed = seed;
            validate(chaos);
            return run_chaos_verify(chaos, common.threads);
        };
    });

    // law-check
    std::int64_t law_n = 3;
    double law_eps = 0.25;
    auto* c_law = app.add_subcommand("law-check", "time-reversal identity in law by enumeration");
    c_law->add_option("--n", law_n);
    c_law->add_option("--eps", law_eps);
    add_common(c_law, common);
    c_law->callback([&] { job = [&] { return run_law_check(law_n, law_eps); }; });

    // rwre-mc
    RwreMcConfig mc;
    std::string mc_dist = "rademacher";
    auto* c_mc = app.add_subcommand("rwre-mc", "Monte Carlo over environments of the rescaled transition probability");
    c_mc->add_option("--v", mc.v);
    c_mc->add_option("--t", mc.t);
    c_mc->add_option("--x", mc.x);
    c_mc->add_option("--eps", mc.eps)->delimiter(',');
    c_mc->add_option("--replicas", mc.replicas);
    c_mc->add_option("--dist", mc_dist);
    c_mc->add_option("--seed", seed)->each([&](const std::string&) { seed_given = true; });
    add_common(c_mc, common);
    c_mc->callback([&] {
        job = [&] {
            mc.dist = parse_dist(mc_dist);
            mc.seed = seed;
            return run_rwre_mc(mc, common.threads);
        };
    });

    // she-solve
    SheConfig she;
    auto* c_she = app.add_subcommand("she-solve", "explicit finite-difference SHE from a narrow wedge");
    c_she->add_option("--v", she.v);
    c_she->add_option("--sigma", she.sigma);
    c_she->add_option("--t", she.t);
    c_she->add_option("--x", she.x, "evaluation point");
    c_she->add_option("--dx", she.grid.dx);
    c_she->add_option("--half-width", she.grid.half_width);
    c_she->add_option("--safety", she.grid.safety, "dt = dx^2 / (2 a safety)");
    c_she->add_option("--replicas", she.replicas);
    c_she->add_option("--seed", seed)->each([&](const std::string&) { seed_given = true; });
    add_common(c_she, common);
    c_she->callback([&] {
        job = [&] {
            she.seed = seed;
            return run_she(she, common.threads);
        };
    });

    // moments
    MomentsConfig mom;
    int mom_k = 1;
    std::vector<double> mom_x;
    int quad_points = 1024;
    auto* c_mom = app.add_subcommand("moments", "rescaled Beta polymer moments against SHE moments");
    c_mom->add_option("--k", mom_k);
    c_mom->add_option("--gamma", mom.gamma);
    c_mom->add_option("--t", mom.t);
    c_mom->add_option("--x", mom_x)->delimiter(',');
    c_mom->add_option("--eps", mom.eps)->delimiter(',');
    c_mom->add_option("--quad-points", quad_points, "circle nodes; lines use twice as many");
    c_mom->add_flag("--closed-form", mom.options.closed_form, "k = 1: use the closed annealed form");
    add_common(c_mom, common);
    c_mom->callback([&] {
        job = [&] {
            detail::require(mom_k == 1 || mom_k == 2, "moments: --k must be 1 or 2");
            if (mom_x.empty()) mom_x.assign(static_cast<std::size_t>(mom_k), 0.0);
            detail::require(mom_x.size() == static_cast<std::size_t>(mom_k), "moments: --x needs exactly k values");
            detail::require(quad_points >= 16, "moments: --quad-points must be >= 16");
            mom.x = mom_x;
            mom.options.circle_points = quad_points;
            mom.options.line_points = 2 * quad_points;
            return run_moment_table(mom);
        };
    });

    // critical-point
    CriticalConfig crit;
    auto* c_crit = app.add_subcommand("critical-point", "saddle of the contour exponent and its Taylor expansion");
    c_crit->add_option("--gamma", crit.gamma);
    c_crit->add_option("--eps", crit.eps);
    c_crit->add_option("--t", crit.t);
    c_crit->add_option("--x", crit.x);
    add_common(c_crit, common);
    c_crit->callback([&] { job = [&] { return run_critical_point(crit); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (!seed_given) seed = default_seed();
        return emit(job(), common);
    } catch (const ConfigError& e) {
        std::cerr << "kpzlab: configuration error: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "kpzlab: numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "kpzlab: configuration error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "kpzlab: error: " << e.what() << '\n';
        return 2;
    }
}
