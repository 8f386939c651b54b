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
#ifndef HOSPFLOW_OUTPUT_HPP
#define HOSPFLOW_OUTPUT_HPP

#include "hospflow/abc.hpp"
#include "hospflow/forecast.hpp"
#include "hospflow/model.hpp"

#include <string>
#include <vector>

namespace hospflow
{

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// One row per sample, one column per parameter name.
void write_samples_csv(const std::string& path, std::span<const ModelParams> samples);
std::vector<ModelParams> read_samples_csv(const std::string& path, int max_duration);

/// Counts as `date,<labels...>`. `dates[i]` labels row i; day numbers are used when empty.
void write_census_csv(const std::string& path, const CensusSeries& counts, std::span<const std::string> dates = {});

/// Long format `date,label,mean,p<level>...`.
void write_forecast_summary_csv(const std::string& path, const ForecastSummary& summary,
                                std::span<const std::string> dates = {});
/// Reads the CSV summary back; the date column goes to `dates` when given.
ForecastSummary read_forecast_summary_csv(const std::string& path, std::vector<std::string>* dates = nullptr);
void write_forecast_summary_json(const std::string& path, const ForecastSummary& summary,
                                 std::span<const std::string> dates = {});

struct MethodMae
{
    std::string method;
    MaeReport report;
};
void write_mae_csv(const std::string& path, std::span<const MethodMae> reports);
void write_mae_json(const std::string& path, std::span<const MethodMae> reports);

struct CoverageRow
{
    std::string label;
    double target = 0.0;
    double observed = 0.0;
};
void write_coverage_csv(const std::string& path, std::span<const CoverageRow> rows);

/// Per-sweep tolerance trace of every chain.
void write_trace_csv(const std::string& path, std::span<const ChainResult> chains);
/// Proposal and acceptance counts per chain and parameter.
void write_acceptance_csv(const std::string& path, std::span<const ChainResult> chains);
/// Distances of proposals that passed the tolerance check.
void write_events_csv(const std::string& path, std::span<const ChainResult> chains);
/// Final tolerances and ensemble membership.
void write_chains_csv(const std::string& path, const FitResult& fit);

} // namespace hospflow

#endif // HOSPFLOW_OUTPUT_HPP
