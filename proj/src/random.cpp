/*
* Copyright (C) 2026 The hospflow authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#include "hospflow/random.hpp"

#include "hospflow/errors.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>

namespace hospflow
{

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream)
{
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double sample_normal(double mean, double sd, Rng& rng)
{
    std::normal_distribution<double> dist(mean, sd);
    return dist(rng);
}

double sample_beta(double a, double b, Rng& rng)
{
    std::gamma_distribution<double> ga(a, 1.0);
    std::gamma_distribution<double> gb(b, 1.0);
    const double x = ga(rng);
    const double y = gb(rng);
    if (x + y <= 0.0) {
        // both gammas underflowed; fall back to the mean
        return a / (a + b);
    }
    return x / (x + y);
}

double normal_cdf(double z)
{
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

namespace
{

// Inverse standard normal cdf expressed through erfc_inv so that upper-tail
// probabilities keep their precision.
double normal_quantile_upper(double q)
{
    // returns z with 1 - Phi(z) = q
    return std::sqrt(2.0) * boost::math::erfc_inv(2.0 * q);
}

} // namespace

double sample_truncated_normal(double mean, double sd, double lower, double upper, Rng& rng)
{
    if (!(lower <= upper) || !(sd > 0.0)) {
        fail(ErrorKind::Domain, "truncated normal needs sd > 0 and lower <= upper");
    }
    if (lower == upper) {
        return lower;
    }
    const double a = (lower - mean) / sd;
    const double b = (upper - mean) / sd;
    const double mass = normal_cdf(b) - normal_cdf(a);
    if (mass > 0.25) {
        for (int attempt = 0; attempt < 100; ++attempt) {
            const double x = sample_normal(mean, sd, rng);
            if (x >= lower && x <= upper) {
                return x;
            }
        }
    }
    // Inverse cdf on the side of the mean holding the interval, which keeps
    // the tail probabilities away from 1.
    double z;
    if (a >= 0.0) {
        const double qa = 0.5 * std::erfc(a / std::sqrt(2.0));
        const double qb = 0.5 * std::erfc(b / std::sqrt(2.0));
        const double q = qb + uniform01(rng) * (qa - qb);
        z = q > 0.0 ? normal_quantile_upper(q) : a;
    }
    else if (b <= 0.0) {
        const double pa = normal_cdf(a);
        const double pb = normal_cdf(b);
        const double p = pa + uniform01(rng) * (pb - pa);
        z = p > 0.0 ? -normal_quantile_upper(p) : b;
    }
    else {
        const double pa = normal_cdf(a);
        const double pb = normal_cdf(b);
        const double p = pa + uniform01(rng) * (pb - pa);
        z = p < 0.5 ? -normal_quantile_upper(p) : normal_quantile_upper(1.0 - p);
    }
    const double x = mean + sd * z;
    return std::clamp(x, lower, upper);
}

int stochastic_round(double x, Rng& rng)
{
    if (!(x >= 0.0) || !std::isfinite(x)) {
        fail(ErrorKind::Domain, "stochastic_round needs a finite non-negative value");
    }
    const double base = std::floor(x);
    const double frac = x - base;
    const int lo = static_cast<int>(base);
    if (frac == 0.0) {
        return lo;
    }
    return uniform01(rng) < frac ? lo + 1 : lo;
}

} // namespace hospflow
