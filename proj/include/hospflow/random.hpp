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
#ifndef HOSPFLOW_RANDOM_HPP
#define HOSPFLOW_RANDOM_HPP

#include <cstdint>
#include <random>

namespace hospflow
{

using Rng = std::mt19937_64;

/// Seed for an independent substream `stream` of `base` (splitmix64 mixing).
/// Chains, forecast samples and batches each get their own substream so
/// results do not depend on execution order.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(double p, Rng& rng)
{
    return uniform01(rng) < p;
}

double sample_normal(double mean, double sd, Rng& rng);

/// Beta(a, b) through the ratio of two gamma draws.
double sample_beta(double a, double b, Rng& rng);

/// Normal(mean, sd^2) restricted to [lower, upper].
double sample_truncated_normal(double mean, double sd, double lower, double upper, Rng& rng);

/// Rounds x >= 0 to floor(x) or ceil(x) so that the expected result is x.
int stochastic_round(double x, Rng& rng);

/// Standard normal cdf, accurate in both tails.
double normal_cdf(double z);

} // namespace hospflow

#endif // HOSPFLOW_RANDOM_HPP
