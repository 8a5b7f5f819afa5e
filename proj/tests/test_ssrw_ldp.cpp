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
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "kpzlab/ssrw_ldp.hpp"

using namespace kpzlab;

// log(C(n, (n+m)/2) 2^-n), 40-digit reference values
TEST(SsrwLdp, LogProbMatchesHighPrecisionValues)
{
    EXPECT_NEAR(ssrw_log_prob(10, 4), -2.1439800628174070999, 1e-13);
    EXPECT_NEAR(ssrw_log_prob(100, 50), -15.469349933134755114, 1e-12);
    EXPECT_NEAR(ssrw_log_prob(1000, -200), -23.795035434399945708, 1e-11);
    EXPECT_NEAR(ssrw_log_prob(25, 13), -5.2442096902277078274, 1e-13);
    EXPECT_NEAR(ssrw_log_prob(7, 7), -4.8520302639196171659, 1e-13);
}

TEST(SsrwLdp, LogProbOutsideSupportIsMinusInfinity)
{
    EXPECT_EQ(ssrw_log_prob(5, 2), -std::numeric_limits<double>::infinity());
    EXPECT_EQ(ssrw_log_prob(5, 7), -std::numeric_limits<double>::infinity());
    EXPECT_EQ(ssrw_log_prob(0, 0), 0.0);
}

TEST(SsrwLdp, LogProbRowSumsToOne)
{
    for (std::int64_t n : {1, 9, 64, 501}) {
        double s = 0.0;
        for (std::int64_t m = -n; m <= n; m += 2) s += std::exp(ssrw_log_prob(n, m));
        EXPECT_NEAR(s, 1.0, 1e-12) << n;
    }
}

TEST(SsrwLdp, RateFunctionValues)
{
    EXPECT_NEAR(rate_pair(0.3).rate, 0.045700541525312847767, 1e-15);
    EXPECT_NEAR(rate_pair(0.5).rate, 0.13081203594113695913, 1e-15);
    EXPECT_NEAR(rate_pair(0.8).rate, 0.3680642071684971187, 1e-15);
    EXPECT_NEAR(rate_pair(0.5).slope, 0.5493061443340548457, 1e-15);
    EXPECT_NEAR(rate_pair(0.8).slope, 1.0986122886681098148, 1e-15);
}

TEST(SsrwLdp, LimitAtOriginIsTwiceTheHeatKernel)
{
    EXPECT_NEAR(ldp_limit(0.5, 1.0, 0.0), 0.92131773192356127804, 1e-14);
}

TEST(SsrwLdp, RescaledProbabilityApproachesLimit)
{
    const double lim = ldp_limit(0.5, 1.0, 0.0);
    double prev = 1.0;
    for (double eps : {0.2, 0.1, 0.05, 0.02}) {
        const double r = rescaled_ssrw({ScalingFrame(eps, 0.5), 1.0, 0.0, 0, 0});
        const double err = std::fabs(r / lim - 1.0);
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 0.05);
}

TEST(SsrwLdp, ShiftsOutsideTheChaosSetRejected)
{
    EXPECT_THROW(rescaled_ssrw({ScalingFrame(0.1, 0.5), 1.0, 0.0, 1, 0}), ConfigError);
    EXPECT_THROW(ldp_limit(0.5, 1.0, 0.0, 0, 1), ConfigError);
}

TEST(SsrwLdp, UniformBoundFitFindsConstant)
{
    std::vector<BoundSample> s;
    for (double t : {0.5, 1.0, 2.0})
        for (double x : {-1.0, -0.5, 0.0, 0.5, 1.0})
            for (double eps : {0.1, 0.05, 0.02}) s.push_back({t, x, eps});
    const auto c = uniform_bound_fit(0.5, s, kChaosShifts);
    ASSERT_TRUE(c.has_value());
    EXPECT_LE(*c, 100.0);
}

TEST(SsrwLdp, HeatKernelIntegratesToOne)
{
    double s = 0.0;
    const double h = 1e-3;
    for (double x = -10.0; x <= 10.0; x += h) s += heat_kernel(0.75, 1.3, x) * h;
    EXPECT_NEAR(s, 1.0, 1e-9);
}
