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

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "kpzlab/errors.hpp"
#include "kpzlab/philox.hpp"

namespace kpzlab {

enum class EnvKind { rademacher, uniform_bounded, beta_symmetric };

inline std::string_view to_string(EnvKind k) noexcept
{
    switch (k) {
    case EnvKind::rademacher: return "rademacher";
    case EnvKind::uniform_bounded: return "uniform_bounded";
    case EnvKind::beta_symmetric: return "beta_symmetric";
    }
    return "unknown";
}

inline EnvKind env_kind_from_string(std::string_view s)
{
    if (s == "rademacher") return EnvKind::rademacher;
    if (s == "uniform_bounded" || s == "uniform") return EnvKind::uniform_bounded;
    if (s == "beta_symmetric" || s == "beta") return EnvKind::beta_symmetric;
    throw ConfigError("unknown environment kind '" + std::string(s) + "'");
}

struct EnvironmentSpec {
    EnvKind kind = EnvKind::rademacher;
    double epsilon = 0.1;
    std::uint64_t seed = 0;
    double bound = 1.0; // half-width a of uniform_bounded
};

inline void validate(const EnvironmentSpec& s)
{
    detail::require(std::isfinite(s.epsilon) && s.epsilon > 0.0, "environment: epsilon must be > 0");
    switch (s.kind) {
    case EnvKind::rademacher:
        detail::require(std::sqrt(s.epsilon) <= 1.0, "environment: rademacher needs epsilon <= 1");
        break;
    case EnvKind::uniform_bounded:
        detail::require(s.bound > 0.0, "environment: uniform bound must be > 0");
        detail::require(s.bound * std::sqrt(s.epsilon) <= 1.0, "environment: uniform needs a*sqrt(epsilon) <= 1");
        break;
    case EnvKind::beta_symmetric:
        detail::require(s.epsilon <= 1.0, "environment: beta_symmetric needs epsilon <= 1 (shape >= 1)");
        break;
    }
}

// One site's draw: the disorder omega and the up-probability weight
// B = (1 + sqrt(eps) omega) / 2. For beta_symmetric B is sampled and omega
// derived, otherwise the other way round.
struct SiteDraw {
    double omega = 0.0;
    double weight = 0.5;
};

inline SiteDraw draw_site(const EnvironmentSpec& s, std::int64_t i, std::int64_t j) noexcept
{
    CounterStream rng(s.seed, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), StreamTag::environment);
    const double se = std::sqrt(s.epsilon);
    switch (s.kind) {
    case EnvKind::rademacher: {
        const double w = (rng.next_u64() >> 63) ? 1.0 : -1.0;
        return {w, 0.5 * (1.0 + se * w)};
    }
    case EnvKind::uniform_bounded: {
        const double w = s.bound * (2.0 * rng.uniform() - 1.0);
        return {w, 0.5 * (1.0 + se * w)};
    }
    case EnvKind::beta_symmetric: {
        const double shape = 1.0 / s.epsilon;
        const double x = rng.gamma(shape);
        const double y = rng.gamma(shape);
        const double b = x / (x + y);
        return {2.0 * (b - 0.5) / se, b};
    }
    }
    return {};
}

// Immutable i.i.d. field indexed by 0 <= i < n_max, |j| <= n_max. Values are
// recomputed on access from (seed, i, j), so the field needs no storage and
// does not depend on access order.
class Environment {
public:
    Environment(EnvironmentSpec spec, std::int64_t n_max) : spec_(spec), n_max_(n_max)
    {
        validate(spec_);
        detail::require(n_max >= 1, "environment: n_max must be >= 1");
    }

    const EnvironmentSpec& spec() const noexcept { return spec_; }
    std::int64_t n_max() const noexcept { return n_max_; }

    SiteDraw site(std::int64_t i, std::int64_t j) const
    {
        if (i < 0 || i >= n_max_ || j < -n_max_ || j > n_max_)
            throw std::out_of_range("environment: site (" + std::to_string(i) + ", " + std::to_string(j) + ") outside bounds");
        return draw_site(spec_, i, j);
    }
    double omega(std::int64_t i, std::int64_t j) const { return site(i, j).omega; }
    double weight(std::int64_t i, std::int64_t j) const { return site(i, j).weight; }

private:
    EnvironmentSpec spec_;
    std::int64_t n_max_;
};

inline Environment sample_environment(const EnvironmentSpec& spec, std::int64_t n_max)
{
    return Environment(spec, n_max);
}

// omega identically zero: the simple symmetric walk
struct NullField {
    double omega(std::int64_t, std::int64_t) const noexcept { return 0.0; }
    double weight(std::int64_t, std::int64_t) const noexcept { return 0.5; }
};

struct OmegaStats {
    std::int64_t n = 0;
    double mean = 0.0;
    double mean_stderr = 0.0;
    double two_m2 = 0.0; // estimate of 2 E omega^2
    double two_m2_stderr = 0.0;
    double sigma = 0.0; // sqrt(two_m2)
};

inline OmegaStats omega_stats(EnvironmentSpec spec, std::int64_t n_samples, std::uint64_t seed)
{
    validate(spec);
    detail::require(n_samples >= 1000, "omega_stats: need at least 1000 samples");
    spec.seed = seed;
    double m1 = 0.0;
    double s1 = 0.0;
    double m2 = 0.0;
    double s2 = 0.0;
    for (std::int64_t k = 0; k < n_samples; ++k) {
        const double w = draw_site(spec, k, 0).omega;
        const double w2 = 2.0 * w * w;
        const double n = static_cast<double>(k + 1);
        const double d1 = w - m1;
        m1 += d1 / n;
        s1 += d1 * (w - m1);
        const double d2 = w2 - m2;
        m2 += d2 / n;
        s2 += d2 * (w2 - m2);
    }
    const double n = static_cast<double>(n_samples);
    OmegaStats out;
    out.n = n_samples;
    out.mean = m1;
    out.mean_stderr = std::sqrt(s1 / (n - 1.0) / n);
    out.two_m2 = m2;
    out.two_m2_stderr = std::sqrt(s2 / (n - 1.0) / n);
    out.sigma = std::sqrt(m2);
    return out;
}

} // namespace kpzlab
