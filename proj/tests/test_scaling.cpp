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

#include <gtest/gtest.h>

#include "kpzlab/scaling.hpp"

using namespace kpzlab;

TEST(Scaling, FrameRejectsBadParameters)
{
    EXPECT_THROW(ScalingFrame(0.0, 0.5), ConfigError);
    EXPECT_THROW(ScalingFrame(0.1, 1.0), ConfigError);
    EXPECT_THROW(ScalingFrame(0.1, 0.0), ConfigError);
    EXPECT_NO_THROW(ScalingFrame(0.1, 0.5));
}

TEST(Scaling, SnapsOnGridPointExactly)
{
    const ScalingFrame f(0.1, 0.5);
    const SnappedPoint p = snap(f, 1.0, 0.0);
    EXPECT_EQ(p.point.i, 100);
    EXPECT_EQ(p.point.j, 50);
    EXPECT_DOUBLE_EQ(p.t_eps, 1.0);
    EXPECT_DOUBLE_EQ(p.x_eps, 0.0);
}

TEST(Scaling, SnappedPointsAreEvenAndCellsContainTheQuery)
{
    for (double eps : {0.2, 0.1, 0.05, 0.013}) {
        const ScalingFrame f(eps, 0.37);
        for (double t : {0.0, 0.3, 1.0, 2.71}) {
            for (double x : {-1.3, -0.2, 0.0, 0.45, 2.0}) {
                const SnappedPoint s = snap(f, t, x);
                EXPECT_TRUE(on_even_sublattice(s.point));
                // bottom/left closed, top/right open
                EXPECT_LE(s.t_eps, t);
                EXPECT_GT(f.time_of(s.point.i + 1), t);
                EXPECT_LE(s.x_eps, x);
                EXPECT_GT(f.space_of(s.point.i, s.point.j + 2), x);
            }
        }
    }
}

TEST(Scaling, AffineMapMatchesFrame)
{
    const ScalingFrame f(0.05, 0.8);
    const SpaceTime a = affine_map(f, {40, 10});
    EXPECT_NEAR(a.t, 40 * 0.05 * 0.05, 1e-15);
    EXPECT_NEAR(a.x, (10 - 0.8 * 40) * 0.05, 1e-14);
}

TEST(Scaling, CellAreaIsTwoEpsCubed)
{
    for (double eps : {0.2, 0.1, 0.01}) {
        const ScalingFrame f(eps, 0.5);
        EXPECT_NEAR(cell_area(f, {7, 3}), 2.0 * eps * eps * eps, 1e-15);
    }
}

TEST(Scaling, NegativeTimeRejected)
{
    const ScalingFrame f(0.1, 0.5);
    EXPECT_THROW(snap(f, -0.01, 0.0), ConfigError);
}
