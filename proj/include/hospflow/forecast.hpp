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
#ifndef HOSPFLOW_FORECAST_HPP
#define HOSPFLOW_FORECAST_HPP

#include "hospflow/model.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hospflow
{

/// One full-horizon simulation per posterior sample, aggregated to `mapping`
/// (base stages are kept when `mapping` is empty). Sample i draws from
/// substream derive_seed(seed, i).
std::vector<CensusSeries> forecast_counts(std::span<const ModelParams> samples, const SimulationInputs& inputs,
                                          std::span<const LabelMapping> mapping, std::uint64_t seed,
                                          const SimulationHooks& hooks = {});

struct LabelSummary
{
    std::string label;
    std::vector<double> mean;
    /// percentiles[j][t] is the levels[j] percentile on day t.
    std::vector<std::vector<double>> percentiles;
};

struct ForecastSummary
{
    int start_day = 1;
    std::size_t num_days = 0;
    std::vector<double> levels;
    std::vector<LabelSummary> labels;
};

/// Empirical percentile (0..100) with linear interpolation between order
/// statistics. `values` is sorted in place.
double percentile(std::vector<double>& values, double level);

ForecastSummary summarize_percentiles(std::span<const CensusSeries> forecasts,
                                      std::span<const double> levels = std::vector<double>{2.5, 50.0, 97.5});

/// Per-day mean across forecasts for one label.
std::vector<double> mean_forecast(std::span<const CensusSeries> forecasts, std::string_view label);

/// Mean absolute error over days.
double mae(std::span<const double> mean_forecast, std::span<const double> truth);

struct MaeEntry
{
    std::string label;
    double mean = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

struct MaeReport
{
    std::vector<MaeEntry> entries;

    const MaeEntry& at(std::string_view label) const;
};

struct BatchOptions
{
    std::size_t batch_size = 100;
    std::size_t n_batches = 100;
};

/// Batched MAE: each batch draws batch_size posterior samples, forecasts the
/// full horizon, averages the forecasts over `truth`'s days and labels, and
/// scores the average. Draws are without replacement while the pool lasts,
/// with replacement when samples < batch_size * n_batches.
MaeReport mae_with_batches(std::span<const ModelParams> samples, const SimulationInputs& inputs,
                           std::span<const LabelMapping> mapping, const CensusSeries& truth,
                           const BatchOptions& options, std::uint64_t seed, const SimulationHooks& hooks = {});

/// Same batching over a pool of precomputed forecasts (used for baselines).
MaeReport mae_with_batches(std::span<const CensusSeries> forecast_pool, const CensusSeries& truth,
                           const BatchOptions& options, std::uint64_t seed);

/// Percentage of days whose truth lies inside the centred `target_pct`
/// interval of the forecasts for `label`.
double coverage(std::span<const CensusSeries> forecasts, const CensusSeries& truth, std::string_view label,
                double target_pct);

} // namespace hospflow

#endif // HOSPFLOW_FORECAST_HPP
