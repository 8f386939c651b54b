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
#ifndef HOSPFLOW_CONFIG_HPP
#define HOSPFLOW_CONFIG_HPP

#include "hospflow/abc.hpp"
#include "hospflow/dataset.hpp"
#include "hospflow/forecast.hpp"
#include "hospflow/interventions.hpp"
#include "hospflow/priors.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace hospflow
{

/// Everything a run needs besides the data files. Parsed from an INI-style
/// plain-text file; every key is optional.
struct RunConfig
{
    // [model]
    int max_duration = 22;
    bool poisson_mode = false;
    double scale = 1.0;
    double warm_start_inflation = 1.03;
    int warm_start_days = 5;
    /// Overrides the standing population otherwise read from the first day.
    std::optional<std::array<int, 3>> initial_counts;

    // [prior]
    OutcomeRates rates;
    double mode_mean = 8.0;
    double mode_sd = 3.0;
    double log10_temperature_mean = 0.5;
    double log10_temperature_sd = 0.5;

    // [proposal]
    ProposalSpec proposal;

    // [abc]
    EpsilonSchedule schedule;
    std::size_t chains = 10;
    std::size_t samples_per_chain = 200;
    std::size_t thin = 1;
    double ensemble_tolerance = 0.1;

    // [weights]
    std::vector<std::pair<std::string, double>> stage_weights;
    double time_weight_start = 0.5;
    double time_weight_end = 1.5;

    // [data], [columns], [labels]
    CsvLoadOptions csv;
    std::optional<std::string> train_end;
    std::optional<std::size_t> train_days;
    std::vector<std::string> smooth_labels;
    int smooth_window = 5;

    // [evaluate]
    BatchOptions batches;
    std::vector<double> coverage_targets = {50.0, 80.0, 95.0};
    std::vector<double> percentile_levels = {2.5, 50.0, 97.5};
    std::size_t lr_samples = 1000;

    // [admissions_scenario], [recovery_scenario]
    std::optional<AdmissionsSchedule> admissions_scenario;
    /// ISO date for the ramp start, resolved against the dataset.
    std::optional<std::string> admissions_scenario_start_date;
    std::optional<RecoveryDurationPolicy> recovery_scenario;

    void validate() const;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// Short schedule and small ensembles for smoke runs.
void apply_fast_mode(RunConfig& config);

} // namespace hospflow

#endif // HOSPFLOW_CONFIG_HPP
