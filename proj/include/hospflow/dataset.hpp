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
#ifndef HOSPFLOW_DATASET_HPP
#define HOSPFLOW_DATASET_HPP

#include "hospflow/model.hpp"

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hospflow
{

/// A label computed from raw CSV columns, e.g. G = total_hospitalized - icu.
struct ColumnSpec
{
    std::string label;
    /// (+1 or -1, raw column name)
    std::vector<std::pair<int, std::string>> terms;
};

/// Parses "a - b + c" into signed terms.
ColumnSpec parse_column_expression(std::string label, std::string_view expression);

struct CsvLoadOptions
{
    std::string date_column = "date";
    std::string admissions_column = "admissions";
    /// Empty: every other column is taken as a label of the same name.
    std::vector<ColumnSpec> columns;
    /// Labels that are not plain stage sets ("AllBeds" -> G+I+V).
    std::vector<LabelMapping> custom_labels;
    /// Moves admissions k days earlier (for "previous day" reporting); the
    /// last k rows are dropped.
    int admissions_shift = 0;
};

struct Dataset
{
    std::vector<std::string> dates;
    std::vector<int> admissions;
    /// Observed counts, day 1 is the first row.
    CensusSeries observed;
    std::vector<LabelMapping> mapping;
    std::size_t train_days = 0;

    std::size_t num_days() const
    {
        return admissions.size();
    }
    std::size_t test_days() const
    {
        return num_days() - train_days;
    }
    CensusSeries train() const;
    CensusSeries test() const;

    /// Day index (1-based) of an ISO date counted from the first row; may lie
    /// outside the dataset.
    std::optional<int> day_of(std::string_view iso_date) const;

    void validate() const;
};

std::optional<std::chrono::sys_days> parse_iso_date(std::string_view text);
std::string format_iso_date(std::chrono::sys_days day);

/// Resolves a label to its stages through `custom` first, then as "G+I+V" syntax.
std::optional<std::vector<Stage>> resolve_label(std::string_view label, std::span<const LabelMapping> custom);

/// Reads `date,admissions,<label columns...>`. Throws a data error naming the
/// row for malformed or missing values, non-consecutive dates and negative counts.
Dataset load_counts_csv(const std::string& path, const CsvLoadOptions& options = {});

void write_dataset_csv(const std::string& path, const Dataset& dataset);

/// Centred moving average. Edge windows shrink to the available days, and a
/// training day (index < train_days) never averages over test days.
std::vector<double> smooth_counts(std::span<const double> series, int window, std::size_t train_days);

} // namespace hospflow

#endif // HOSPFLOW_DATASET_HPP
