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
#ifndef HOSPFLOW_PIPELINE_HPP
#define HOSPFLOW_PIPELINE_HPP

#include "hospflow/abc.hpp"
#include "hospflow/config.hpp"
#include "hospflow/dataset.hpp"
#include "hospflow/forecast.hpp"
#include "hospflow/output.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hospflow
{

/// Loads a counts CSV and applies the configured training split and smoothing.
Dataset load_dataset(const RunConfig& config, const std::string& path);

/// Training split and smoothing for an in-memory dataset.
void prepare_dataset(const RunConfig& config, Dataset& dataset);

/// Standing G, I, V population: the config override, or the first observed
/// day. Aggregate labels are split evenly over their unobserved stages.
std::array<int, 3> initial_counts(const RunConfig& config, const Dataset& dataset);

SimulationInputs make_inputs(const RunConfig& config, std::span<const int> admissions,
                             const std::array<int, 3>& initial);

PriorSpec build_prior(const RunConfig& config);

/// Configured stage weights (rescaled to mean one) or the preset for the
/// stage sets behind `mapping`.
DistanceWeights build_weights(const RunConfig& config, std::span<const LabelMapping> mapping);

AbcProblem build_problem(const RunConfig& config, const Dataset& dataset);

FitOptions build_fit_options(const RunConfig& config, unsigned threads);

/// Smooth single-wave admissions profile for a single hospital, times `multiplier`.
std::vector<int> synthetic_admissions(std::size_t days, int multiplier);

/// Synthetic dataset with labels G, I, V, R, T simulated under `truth`.
Dataset simulate_dataset(const RunConfig& config, const ModelParams& truth, std::span<const int> admissions,
                         const std::array<int, 3>& initial, std::uint64_t seed,
                         const std::string& start_date = "2020-01-01");

struct ForecastRun
{
    std::vector<CensusSeries> draws;
    ForecastSummary summary;
};

/// Forecasts every dataset day from every sample.
ForecastRun run_forecast(const RunConfig& config, const Dataset& dataset, std::span<const ModelParams> samples,
                         std::uint64_t seed, const SimulationHooks& hooks = {});

struct Evaluation
{
    std::vector<MethodMae> mae;
    std::vector<CoverageRow> coverage;
};

/// Test-period MAE of the model and of the median and linear-regression
/// baselines, plus interval coverage of the model.
Evaluation run_evaluation(const RunConfig& config, const Dataset& dataset, std::span<const ModelParams> samples,
                          std::uint64_t seed);

/// Hooks for the configured scenarios; empty when none is configured.
SimulationHooks scenario_hooks(const RunConfig& config, const Dataset& dataset);

struct WhatIf
{
    ForecastSummary baseline;
    ForecastSummary scenario;
    /// Paired per-draw scenario minus baseline.
    ForecastSummary difference;
};

/// Baseline and scenario forecasts sharing random streams.
WhatIf run_whatif(const RunConfig& config, const Dataset& dataset, std::span<const ModelParams> samples,
                  std::uint64_t seed);

} // namespace hospflow

#endif // HOSPFLOW_PIPELINE_HPP
