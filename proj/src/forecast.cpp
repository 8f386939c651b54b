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
#include "hospflow/forecast.hpp"

#include "hospflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hospflow
{

namespace
{

// Forecast days matching `truth` (same labels, same day range).
CensusSeries align(const CensusSeries& forecast, const CensusSeries& truth)
{
    CensusSeries window = forecast.slice(truth.start_day(), truth.num_days());
    CensusSeries out(truth.start_day(), truth.num_days(), {});
    for (const auto& label : truth.labels()) {
        const auto col = window.at(label);
        out.add(label, std::vector<double>(col.begin(), col.end()));
    }
    return out;
}

MaeReport batched_report(const CensusSeries& truth, const std::vector<std::vector<double>>& batch_scores)
{
    MaeReport report;
    for (std::size_t k = 0; k < truth.labels().size(); ++k) {
        std::vector<double> scores = batch_scores[k];
        MaeEntry entry;
        entry.label = truth.labels()[k];
        entry.mean = std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
        entry.lower = percentile(scores, 2.5);
        entry.upper = percentile(scores, 97.5);
        // keep lower <= mean <= upper despite rounding in the interpolation
        entry.lower = std::min(entry.lower, entry.mean);
        entry.upper = std::max(entry.upper, entry.mean);
        report.entries.push_back(entry);
    }
    return report;
}

// Indices for batch b, drawn without replacement from a shuffled pool when it
// is large enough, otherwise with replacement.
std::vector<std::size_t> batch_indices(std::size_t pool, const BatchOptions& opt, std::size_t batch,
                                       const std::vector<std::size_t>& shuffled, Rng& rng)
{
    std::vector<std::size_t> idx(opt.batch_size);
    if (pool >= opt.batch_size * opt.n_batches) {
        std::copy_n(shuffled.begin() + static_cast<std::ptrdiff_t>(batch * opt.batch_size), opt.batch_size,
                    idx.begin());
    }
    else {
        std::uniform_int_distribution<std::size_t> pick(0, pool - 1);
        for (auto& i : idx) {
            i = pick(rng);
        }
    }
    return idx;
}

void check_batches(std::size_t pool, const BatchOptions& opt)
{
    if (pool == 0) {
        fail(ErrorKind::InvalidArgument, "batched MAE needs at least one sample");
    }
    if (opt.batch_size == 0 || opt.n_batches == 0) {
        fail(ErrorKind::InvalidArgument, "batch size and batch count must be positive");
    }
}

} // namespace

std::vector<CensusSeries> forecast_counts(std::span<const ModelParams> samples, const SimulationInputs& inputs,
                                          std::span<const LabelMapping> mapping, std::uint64_t seed,
                                          const SimulationHooks& hooks)
{
    if (samples.empty()) {
        fail(ErrorKind::InvalidArgument, "forecasting needs at least one parameter sample");
    }
    std::vector<CensusSeries> out;
    out.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        Rng rng(derive_seed(seed, i));
        CensusSeries sim = simulate_census(samples[i], inputs, rng, hooks);
        out.push_back(mapping.empty() ? std::move(sim) : aggregate_counts(sim, mapping));
    }
    return out;
}

double percentile(std::vector<double>& values, double level)
{
    if (values.empty()) {
        fail(ErrorKind::InvalidArgument, "percentile of an empty set");
    }
    if (!(level >= 0.0 && level <= 100.0)) {
        fail(ErrorKind::InvalidArgument, "percentile level must lie in [0, 100]");
    }
    std::sort(values.begin(), values.end());
    const double pos = level / 100.0 * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

ForecastSummary summarize_percentiles(std::span<const CensusSeries> forecasts, std::span<const double> levels)
{
    if (forecasts.empty()) {
        fail(ErrorKind::InvalidArgument, "summary needs at least one forecast");
    }
    std::vector<double> sorted_levels(levels.begin(), levels.end());
    std::sort(sorted_levels.begin(), sorted_levels.end());
    const CensusSeries& first = forecasts.front();
    ForecastSummary summary;
    summary.start_day = first.start_day();
    summary.num_days = first.num_days();
    summary.levels = sorted_levels;
    std::vector<double> column(forecasts.size());
    for (const auto& label : first.labels()) {
        LabelSummary ls;
        ls.label = label;
        ls.mean.assign(summary.num_days, 0.0);
        ls.percentiles.assign(sorted_levels.size(), std::vector<double>(summary.num_days, 0.0));
        for (std::size_t t = 0; t < summary.num_days; ++t) {
            for (std::size_t i = 0; i < forecasts.size(); ++i) {
                column[i] = forecasts[i].at(label)[t];
            }
            ls.mean[t] = std::accumulate(column.begin(), column.end(), 0.0) / static_cast<double>(column.size());
            for (std::size_t j = 0; j < sorted_levels.size(); ++j) {
                ls.percentiles[j][t] = percentile(column, sorted_levels[j]);
            }
        }
        summary.labels.push_back(std::move(ls));
    }
    return summary;
}

std::vector<double> mean_forecast(std::span<const CensusSeries> forecasts, std::string_view label)
{
    if (forecasts.empty()) {
        fail(ErrorKind::InvalidArgument, "mean of no forecasts");
    }
    std::vector<double> mean(forecasts.front().num_days(), 0.0);
    for (const auto& f : forecasts) {
        const auto col = f.at(label);
        for (std::size_t t = 0; t < mean.size(); ++t) {
            mean[t] += col[t];
        }
    }
    for (double& m : mean) {
        m /= static_cast<double>(forecasts.size());
    }
    return mean;
}

double mae(std::span<const double> mean_forecast, std::span<const double> truth)
{
    if (mean_forecast.size() != truth.size()) {
        fail(ErrorKind::InvalidArgument, "forecast and truth differ in length");
    }
    if (truth.empty()) {
        fail(ErrorKind::InvalidArgument, "MAE over zero days");
    }
    double total = 0.0;
    for (std::size_t t = 0; t < truth.size(); ++t) {
        total += std::abs(mean_forecast[t] - truth[t]);
    }
    return total / static_cast<double>(truth.size());
}

const MaeEntry& MaeReport::at(std::string_view label) const
{
    for (const auto& e : entries) {
        if (e.label == label) {
            return e;
        }
    }
    fail(ErrorKind::InvalidArgument, "MAE report has no label '" + std::string(label) + "'");
}

MaeReport mae_with_batches(std::span<const ModelParams> samples, const SimulationInputs& inputs,
                           std::span<const LabelMapping> mapping, const CensusSeries& truth,
                           const BatchOptions& options, std::uint64_t seed, const SimulationHooks& hooks)
{
    check_batches(samples.size(), options);
    Rng rng(derive_seed(seed, 0));
    std::vector<std::size_t> shuffled(samples.size());
    std::iota(shuffled.begin(), shuffled.end(), std::size_t{0});
    std::shuffle(shuffled.begin(), shuffled.end(), rng);

    std::vector<std::vector<double>> scores(truth.labels().size());
    for (std::size_t b = 0; b < options.n_batches; ++b) {
        const auto idx = batch_indices(samples.size(), options, b, shuffled, rng);
        std::vector<ModelParams> batch;
        batch.reserve(idx.size());
        for (auto i : idx) {
            batch.push_back(samples[i]);
        }
        auto forecasts = forecast_counts(batch, inputs, mapping, derive_seed(seed, b + 1), hooks);
        for (auto& f : forecasts) {
            f = align(f, truth);
        }
        for (std::size_t k = 0; k < truth.labels().size(); ++k) {
            scores[k].push_back(mae(mean_forecast(forecasts, truth.labels()[k]), truth.column(k)));
        }
    }
    return batched_report(truth, scores);
}

MaeReport mae_with_batches(std::span<const CensusSeries> forecast_pool, const CensusSeries& truth,
                           const BatchOptions& options, std::uint64_t seed)
{
    check_batches(forecast_pool.size(), options);
    Rng rng(derive_seed(seed, 0));
    std::vector<std::size_t> shuffled(forecast_pool.size());
    std::iota(shuffled.begin(), shuffled.end(), std::size_t{0});
    std::shuffle(shuffled.begin(), shuffled.end(), rng);

    std::vector<std::vector<double>> scores(truth.labels().size());
    for (std::size_t b = 0; b < options.n_batches; ++b) {
        const auto idx = batch_indices(forecast_pool.size(), options, b, shuffled, rng);
        std::vector<CensusSeries> batch;
        batch.reserve(idx.size());
        for (auto i : idx) {
            batch.push_back(align(forecast_pool[i], truth));
        }
        for (std::size_t k = 0; k < truth.labels().size(); ++k) {
            scores[k].push_back(mae(mean_forecast(batch, truth.labels()[k]), truth.column(k)));
        }
    }
    return batched_report(truth, scores);
}

double coverage(std::span<const CensusSeries> forecasts, const CensusSeries& truth, std::string_view label,
                double target_pct)
{
    if (forecasts.empty()) {
        fail(ErrorKind::InvalidArgument, "coverage needs at least one forecast");
    }
    if (!(target_pct >= 0.0 && target_pct <= 100.0)) {
        fail(ErrorKind::InvalidArgument, "coverage target must lie in [0, 100]");
    }
    const double lo_level = (100.0 - target_pct) / 2.0;
    const double hi_level = 100.0 - lo_level;
    const auto y = truth.at(label);
    std::vector<double> column(forecasts.size());
    std::size_t inside = 0;
    for (std::size_t t = 0; t < truth.num_days(); ++t) {
        const int day = truth.start_day() + static_cast<int>(t);
        for (std::size_t i = 0; i < forecasts.size(); ++i) {
            const auto& f = forecasts[i];
            const auto offset = day - f.start_day();
            if (offset < 0 || static_cast<std::size_t>(offset) >= f.num_days()) {
                fail(ErrorKind::InvalidArgument, "forecast does not cover the truth horizon");
            }
            column[i] = f.at(label)[static_cast<std::size_t>(offset)];
        }
        const double lo = percentile(column, lo_level);
        const double hi = percentile(column, hi_level);
        if (y[t] >= lo && y[t] <= hi) {
            ++inside;
        }
    }
    return truth.num_days() == 0 ? 0.0 : 100.0 * static_cast<double>(inside) / static_cast<double>(truth.num_days());
}

} // namespace hospflow
