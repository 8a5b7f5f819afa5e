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


// Prints how the rescaled walk probability approaches its limit as the
// lattice refines, for the three shifts used by the chaos coefficients.

#include <cstdio>
#include <initializer_list>

#include "kpzlab.hpp"

int main()
{
    using namespace kpzlab;
    const double v = 0.5;
    const double t = 1.0;
    const double x = 0.3;

    for (const Shift s : kChaosShifts) {
        std::printf("shift (%d, %d)  limit %.6f\n", s.m1, s.m2, ldp_limit(v, t, x, s.m1, s.m2));
        for (double eps : {0.2, 0.1, 0.05, 0.02, 0.01}) {
            const ScalingFrame f(eps, v);
            const SnappedPoint p = snap(f, t, x);
            const double r = rescaled_ssrw({f, t, x, s.m1, s.m2});
            std::printf("  eps %-5g N %-6lld j %-6lld value %.6f ratio %.5f\n", eps, static_cast<long long>(p.point.i),
                        static_cast<long long>(p.point.j), r, r / ldp_limit(v, t, x, s.m1, s.m2));
        }
    }

    // one disordered walk at the same point
    const double eps = 0.05;
    const ScalingFrame f(eps, v);
    const Environment env({EnvKind::rademacher, eps, 7, 1.0}, snap(f, t, x).point.i + 1);
    std::printf("one rademacher environment, eps %g: %.6f\n", eps, rescaled_rwre(env, f, t, x).value);
    return 0;
}
