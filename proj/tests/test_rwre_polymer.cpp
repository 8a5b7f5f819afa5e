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


#include <cmath>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "kpzlab/rwre_polymer.hpp"

using namespace kpzlab;

namespace {

struct ConstantOmega {
    double c;
    double omega(std::int64_t, std::int64_t) const { return c; }
};

struct ConstantWeight {
    double b;
    double weight(std::int64_t, std::int64_t) const { return b; }
};

double log_binom(std::int64_t n, std::int64_t k)
{
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

} // namespace

TEST(Rwre, NullFieldReproducesSimpleWalk)
{
    for (std::int64_t N : {1, 6, 41}) {
        for (std::int64_t y = -N; y <= N; y += 2)
            EXPECT_NEAR(rwre_log_transition(NullField{}, 0.1, N, y), ssrw_log_prob(N, y), 1e-12) << N << " " << y;
    }
}

TEST(Rwre, ConstantDisorderGivesBinomial)
{
    // every step goes up with p = (1 + sqrt(eps) c)/2
    const double eps = 0.09;
    const double c = 0.7;
    const double p = 0.5 * (1.0 + std::sqrt(eps) * c);
    const std::int64_t N = 30;
    for (std::int64_t y = -N; y <= N; y += 2) {
        const std::int64_t up = (N + y) / 2;
        const double expect = log_binom(N, up) + up * std::log(p) + (N - up) * std::log1p(-p);
        EXPECT_NEAR(rwre_log_transition(ConstantOmega{c}, eps, N, y), expect, 1e-11);
    }
}

TEST(Rwre, RowMassIsOne)
{
    const Environment env({EnvKind::uniform_bounded, 0.2, 17, 1.0}, 200);
    const LogProbRow row = evolve_rwre(env, 0.2, 199);
    EXPECT_NEAR(std::exp(row.log_mass()), 1.0, 1e-12);
}

TEST(Rwre, OddParityTargetHasZeroProbability)
{
    EXPECT_EQ(rwre_log_transition(NullField{}, 0.1, 5, 2), kNegInf);
}

TEST(Rwre, JumpProbabilityOutsideUnitIntervalRejected)
{
    EXPECT_THROW(rwre_log_transition(ConstantOmega{3.0}, 0.25, 4, 0), ConfigError);
}

TEST(Rwre, RescaledNullFieldEqualsRescaledSimpleWalk)
{
    const ScalingFrame f(0.05, 0.5);
    const RescaledValue r = rescaled_rwre(NullField{}, f, 1.0, 0.2);
    EXPECT_NEAR(r.value, rescaled_ssrw({f, 1.0, 0.2, 0, 0}), 1e-12);
}

TEST(Rwre, EnvironmentTooShortRejected)
{
    const Environment env({EnvKind::rademacher, 0.1, 1, 1.0}, 50);
    EXPECT_THROW(rescaled_rwre(env, ScalingFrame(0.1, 0.5), 1.0, 0.0), ConfigError);
}

TEST(Polymer, ConstantWeightsGiveBinomial)
{
    const double b = 0.3;
    const std::int64_t N = 25;
    const LogProbRow z = polymer_evolve(ConstantWeight{b}, N);
    for (std::int64_t x = 1; x <= N + 1; ++x) {
        const double expect = log_binom(N, x - 1) + (N - x + 1) * std::log(b) + (x - 1) * std::log1p(-b);
        EXPECT_NEAR(z.at(x), expect, 1e-11) << x;
    }
}

TEST(Polymer, WeightsIntoEachVertexConserveStartMass)
{
    const Environment env({EnvKind::beta_symmetric, 0.2, 4, 1.0}, 80);
    for (std::int64_t x : {1, 10, 30, 61}) {
        const PolymerMass m = polymer_start_mass(env, 60, x);
        EXPECT_NEAR(m.log_total, 0.0, 1e-12) << x;
        EXPECT_NEAR(m.log_from_origin, polymer_evolve(env, 60).at(x), 1e-10) << x;
    }
}

TEST(Polymer, SnapKeepsDriftRelation)
{
    const double gamma = 0.25;
    for (double eps : {0.2, 0.1, 0.05}) {
        const ScalingFrame f = polymer_frame(gamma, eps);
        const PolymerPoint p = polymer_snap(f, 1.0, 0.3);
        // n = gamma T + x_eps / eps
        EXPECT_NEAR(static_cast<double>(p.n), gamma * p.T + p.x_eps / eps, 1e-9);
        EXPECT_LE(std::fabs(p.x_eps - 0.3), eps);
    }
}

TEST(Polymer, TimeReversalLawHoldsForSmallN)
{
    for (std::int64_t N = 1; N <= 4; ++N) {
        const LawCheckResult r = time_reversal_law_check(N);
        EXPECT_TRUE(r.equal) << N;
        EXPECT_EQ(static_cast<std::int64_t>(r.rows.size()), N + 1);
    }
    EXPECT_THROW(time_reversal_law_check(5), ConfigError);
}

TEST(Rwre, AnnealedSecondMomentWithoutDisorderIsSquare)
{
    for (std::int64_t y : {-6, 0, 4}) EXPECT_NEAR(rwre_log_annealed_second_moment(0.1, 0.0, 12, y), 2.0 * ssrw_log_prob(12, y), 1e-12);
}

TEST(Rwre, AnnealedSecondMomentMatchesEnumeration)
{
    // all 2^10 sign fields on rows 0..3
    const std::int64_t N = 4;
    const double eps = 0.3;
    std::vector<std::pair<std::int64_t, std::int64_t>> sites;
    for (std::int64_t n = 0; n < N; ++n)
        for (std::int64_t j = -n; j <= n; j += 2) sites.push_back({n, j});
    for (std::int64_t y = -N; y <= N; y += 2) {
        double acc = 0.0;
        for (std::uint32_t m = 0; m < (1u << sites.size()); ++m) {
            detail::SiteMapField f;
            f.sqrt_eps = std::sqrt(eps);
            for (std::size_t l = 0; l < sites.size(); ++l) f.w[sites[l]] = (m >> l) & 1u ? 1.0 : -1.0;
            const double p = std::exp(rwre_log_transition(f, eps, N, y));
            acc += p * p;
        }
        acc /= static_cast<double>(1u << sites.size());
        EXPECT_NEAR(std::exp(rwre_log_annealed_second_moment(eps, 1.0, N, y)), acc, 1e-14) << y;
    }
}
