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
#include <map>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "kpzlab/chaos.hpp"
#include "kpzlab/environment.hpp"

using namespace kpzlab;

namespace {

struct SparseOmega {
    std::map<std::pair<std::int64_t, std::int64_t>, double> w;
    double omega(std::int64_t i, std::int64_t j) const
    {
        const auto it = w.find({i, j});
        return it == w.end() ? 0.0 : it->second;
    }
};

// Coefficient of prod omega_z over pts by inclusion-exclusion: the
// probability is multilinear, so averaging sign products over +-1 at the
// chosen sites (zero elsewhere, eps = 1) isolates that monomial.
double coefficient_by_signs(std::int64_t N, std::int64_t y, const std::vector<LatticePoint>& pts)
{
    const std::size_t k = pts.size();
    double s = 0.0;
    for (std::uint32_t m = 0; m < (1u << k); ++m) {
        SparseOmega f;
        double sign = 1.0;
        for (std::size_t l = 0; l < k; ++l) {
            const double v = (m >> l) & 1u ? 1.0 : -1.0;
            f.w[{pts[l].i, pts[l].j}] = v;
            sign *= v;
        }
        s += sign * std::exp(rwre_log_transition(f, 1.0, N, y));
    }
    return s / static_cast<double>(1u << k);
}

} // namespace

TEST(Chaos, HandComputedCoefficients)
{
    // P(S_1 = 1) = (1 + eta w)/2
    const std::vector<LatticePoint> one{{0, 0}};
    EXPECT_DOUBLE_EQ(chaos_coefficient(1, 1, one), 0.5);
    EXPECT_DOUBLE_EQ(chaos_coefficient(1, -1, one), -0.5);
    // P(S_2 = 2) = (1 + eta w00)(1 + eta w11)/4
    const std::vector<LatticePoint> two{{0, 0}, {1, 1}};
    EXPECT_DOUBLE_EQ(chaos_coefficient(2, 2, two), 0.25);
}

TEST(Chaos, CoefficientsMatchSignAveraging)
{
    const std::vector<std::vector<LatticePoint>> cases{
        {{0, 0}}, {{2, 0}}, {{1, -1}, {3, 1}}, {{0, 0}, {2, 2}, {4, 0}}, {{1, 1}, {2, 0}, {5, -1}}};
    for (const auto& pts : cases) {
        for (std::int64_t y = -7; y <= 7; y += 2) {
            EXPECT_NEAR(chaos_coefficient(7, y, pts), coefficient_by_signs(7, y, pts), 1e-14);
        }
    }
}

TEST(Chaos, RejectsBadTuples)
{
    const std::vector<LatticePoint> odd{{1, 0}};
    EXPECT_THROW(chaos_coefficient(4, 0, odd), ConfigError);
    const std::vector<LatticePoint> unordered{{2, 0}, {2, 2}};
    EXPECT_THROW(chaos_coefficient(4, 0, unordered), ConfigError);
    const std::vector<LatticePoint> late{{4, 0}};
    EXPECT_THROW(chaos_coefficient(4, 0, late), ConfigError);
}

TEST(Chaos, FullExpansionReproducesTransitionProbability)
{
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Environment env({EnvKind::uniform_bounded, 0.3, seed, 1.0}, 9);
        for (std::int64_t y = -8; y <= 8; y += 2) EXPECT_LE(chaos_identity_residual(env, 0.3, 8, y), 1e-12);
    }
}

TEST(Chaos, RingRecursionMatchesNumericWalk)
{
    const double eps = 0.2;
    const Environment env({EnvKind::rademacher, eps, 3, 1.0}, 25);
    for (std::int64_t y = -24; y <= 24; y += 6) {
        const double p = std::exp(rwre_log_transition(env, eps, 24, y));
        const double q = chaos_poly_dp(env, 24, y).evaluate(std::sqrt(eps));
        EXPECT_NEAR(q / p, 1.0, 1e-13) << y;
    }
}

TEST(Chaos, DegreeSumsAgreeWithRing)
{
    const Environment env({EnvKind::beta_symmetric, 0.5, 8, 1.0}, 9);
    const auto sums = enumerate_chaos(env, 8, 2);
    const auto poly = chaos_poly_dp(env, 8, 2);
    ASSERT_EQ(sums.size(), poly.coefficients.size());
    for (std::size_t d = 0; d < sums.size(); ++d) EXPECT_NEAR(sums[d], poly.coefficients[d], 1e-14) << d;
}

TEST(Chaos, RescaledCoefficientApproachesLimit)
{
    const std::vector<SpaceTime> pts{{0.4, 0.1}};
    const double lim = chaos_coefficient_limit(0.5, pts, 1.0, 0.2);
    const double r = rescaled_chaos_coefficient(ScalingFrame(0.02, 0.5), pts, 1.0, 0.2);
    EXPECT_NEAR(r / lim, 1.0, 0.1);
}
