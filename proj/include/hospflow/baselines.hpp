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
#ifndef HOSPFLOW_BASELINES_HPP
#define HOSPFLOW_BASELINES_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hospflow
{

/// Lower median of the training counts, repeated over the horizon.
std::vector<double> median_forecast(std::span<const double> train, std::size_t horizon);

enum class LrFeatureMode
{
    DayOnly,
    /// Day index plus admissions on each of the previous 21 days (zero before day 1).
    DayPlusAdmissions21,
};

inline constexpr int kLrAdmissionLags = 21;

/// Raw (unstandardised) features for day `day` (1-based). admissions[i] is day i + 1.
std::vector<double> lr_features(LrFeatureMode mode, int day, std::span<const int> admissions);

struct LrPrior
{
    /// Prior precision of each standardised coefficient, in units of the noise precision.
    double coefficient_precision = 1e-6;
    /// Inverse-gamma shape and scale of the noise variance.
    double noise_shape = 1e-6;
    double noise_scale = 1e-6;
};

struct LrForecast
{
    /// Posterior predictive mean for each test day.
    std::vector<double> mean;
    /// samples[s][t] for test day t.
    std::vector<std::vector<double>> samples;
    /// Posterior mean of [intercept, standardised coefficients...].
    std::vector<double> coefficients;
    /// Indices of features dropped for having zero training variance.
    std::vector<std::size_t> dropped_features;
};

/// Conjugate normal-inverse-gamma linear regression of `train` on the
/// features of days 1..T, predicting days T+1..T+horizon. The intercept is
/// unpenalised; features are standardised on the training days.
/// `admissions` must cover all T + horizon days.
LrForecast bayes_lr_forecast(std::span<const double> train, std::span<const int> admissions, LrFeatureMode mode,
                             std::size_t horizon, std::size_t n_samples, std::uint64_t seed,
                             const LrPrior& prior = {});

} // namespace hospflow

#endif // HOSPFLOW_BASELINES_HPP
