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
#include "hospflow/pipeline.hpp"

#include "hospflow/baselines.hpp"
#include "hospflow/errors.hpp"
#include "hospflow/interventions.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>

namespace hospflow
{

namespace
{

std::string canonical(const std::vector<Stage>& stages)
{
    std::string out;
    for (const auto s : stages) {
        if (!out.empty()) {
            out += '+';
        }
        out += stage_name(s);
    }
    return out;
}

CensusSeries difference(const CensusSeries& a, const CensusSeries& b)
{
    CensusSeries out(a.start_day(), a.num_days(), {});
    for (std::size_t k = 0; k < a.labels().size(); ++k) {
        const auto x = a.column(k);
        const auto y = b.at(a.labels()[k]);
        std::vector<double> d(x.size());
        for (std::size_t t = 0; t < x.size(); ++t) {
            d[t] = x[t] - y[t];
        }
        out.add(a.labels()[k], std::move(d));
    }
    return out;
}

} // namespace

void prepare_dataset(const RunConfig& config, Dataset& dataset)
{
    if (config.train_end) {
        const auto day = dataset.day_of(*config.train_end);
        if (!day || *day < 1 || static_cast<std::size_t>(*day) > dataset.num_days()) {
            fail(ErrorKind::Data, "train_end " + *config.train_end + " is outside the dataset");
        }
        dataset.train_days = static_cast<std::size_t>(*day);
    }
    else if (config.train_days) {
        if (*config.train_days > dataset.num_days()) {
            fail(ErrorKind::Data, "train_days exceeds the dataset length");
        }
        dataset.train_days = *config.train_days;
    }
    for (const auto& label : config.smooth_labels) {
        if (!dataset.observed.has_label(label)) {
            fail(ErrorKind::Config, "config key [data] smooth: dataset has no label '" + label + "'");
        }
        auto column = dataset.observed.at(label);
        const auto smoothed = smooth_counts(column, config.smooth_window, dataset.train_days);
        std::copy(smoothed.begin(), smoothed.end(), column.begin());
    }
    dataset.validate();
}

Dataset load_dataset(const RunConfig& config, const std::string& path)
{
    auto dataset = load_counts_csv(path, config.csv);
    prepare_dataset(config, dataset);
    return dataset;
}

std::array<int, 3> initial_counts(const RunConfig& config, const Dataset& dataset)
{
    if (config.initial_counts) {
        return *config.initial_counts;
    }
    std::array<int, 3> counts{};
    if (dataset.num_days() == 0) {
        return counts;
    }
    std::array<bool, 3> known{};
    const auto day_one = [&](std::size_t k) {
        return std::max(0.0, std::round(dataset.observed.column(k)[0]));
    };
    for (std::size_t k = 0; k < dataset.mapping.size(); ++k) {
        const auto& stages = dataset.mapping[k].stages;
        if (stages.size() == 1 && !is_terminal(stages[0])) {
            counts[stage_index(stages[0])] = static_cast<int>(day_one(k));
            known[stage_index(stages[0])] = true;
        }
    }
    for (std::size_t k = 0; k < dataset.mapping.size(); ++k) {
        const auto& stages = dataset.mapping[k].stages;
        if (stages.size() < 2) {
            continue;
        }
        double rest = day_one(k);
        std::vector<std::size_t> open;
        for (const auto s : stages) {
            if (is_terminal(s)) {
                continue;
            }
            if (known[stage_index(s)]) {
                rest -= counts[stage_index(s)];
            }
            else {
                open.push_back(stage_index(s));
            }
        }
        if (open.empty()) {
            continue;
        }
        const int total = static_cast<int>(std::max(0.0, rest));
        const int share = total / static_cast<int>(open.size());
        int extra = total - share * static_cast<int>(open.size());
        for (const auto i : open) {
            counts[i] = share + (extra-- > 0 ? 1 : 0);
            known[i] = true;
        }
    }
    return counts;
}

SimulationInputs make_inputs(const RunConfig& config, std::span<const int> admissions,
                             const std::array<int, 3>& initial)
{
    SimulationInputs in;
    in.admissions.assign(admissions.begin(), admissions.end());
    in.initial_counts = initial;
    in.scale = config.scale;
    in.warm_start_inflation = config.warm_start_inflation;
    in.warm_start_days = config.warm_start_days;
    return in;
}

PriorSpec build_prior(const RunConfig& config)
{
    auto prior = make_prior_spec(derive_transition_priors(config.rates), config.max_duration, config.poisson_mode);
    for (auto& m : prior.mode) {
        m.mean = config.mode_mean;
        m.sd = config.mode_sd;
    }
    for (auto& t : prior.log10_temperature) {
        t.mean = config.log10_temperature_mean;
        t.sd = config.log10_temperature_sd;
    }
    prior.validate();
    return prior;
}

DistanceWeights build_weights(const RunConfig& config, std::span<const LabelMapping> mapping)
{
    DistanceWeights w;
    if (config.stage_weights.empty()) {
        std::vector<std::string> names;
        for (const auto& m : mapping) {
            names.push_back(canonical(m.stages));
        }
        const auto preset = DistanceWeights::preset(names);
        for (std::size_t k = 0; k < mapping.size(); ++k) {
            w.stage.emplace_back(mapping[k].label, preset.stage_weight(names[k]));
        }
    }
    else {
        double sum = 0.0;
        for (const auto& m : mapping) {
            const auto it = std::find_if(config.stage_weights.begin(), config.stage_weights.end(),
                                         [&](const auto& p) { return p.first == m.label; });
            if (it == config.stage_weights.end()) {
                fail(ErrorKind::Config, "config section [weights] has no weight for label '" + m.label + "'");
            }
            w.stage.push_back(*it);
            sum += it->second;
        }
        for (auto& [label, u] : w.stage) {
            u *= static_cast<double>(mapping.size()) / sum;
        }
    }
    const double mean_time = 0.5 * (config.time_weight_start + config.time_weight_end);
    w.time_start = config.time_weight_start / mean_time;
    w.time_end = config.time_weight_end / mean_time;
    return w;
}

AbcProblem build_problem(const RunConfig& config, const Dataset& dataset)
{
    if (dataset.train_days == 0) {
        fail(ErrorKind::Data, "dataset has no training days");
    }
    AbcProblem problem;
    problem.observed = dataset.train();
    problem.mapping = dataset.mapping;
    const std::span<const int> adm(dataset.admissions.data(), dataset.train_days);
    problem.inputs = make_inputs(config, adm, initial_counts(config, dataset));
    problem.prior = build_prior(config);
    problem.proposal = config.proposal;
    problem.proposal.max_duration = config.max_duration;
    problem.weights = build_weights(config, dataset.mapping);
    problem.schedule = config.schedule;
    problem.validate();
    return problem;
}

FitOptions build_fit_options(const RunConfig& config, unsigned threads)
{
    FitOptions options;
    options.n_chains = config.chains;
    options.chain.n_samples = config.samples_per_chain;
    options.chain.thin = config.thin;
    options.ensemble_tolerance = config.ensemble_tolerance;
    options.threads = threads;
    return options;
}

std::vector<int> synthetic_admissions(std::size_t days, int multiplier)
{
    if (multiplier < 0) {
        fail(ErrorKind::InvalidArgument, "admissions multiplier must be non-negative");
    }
    std::vector<int> out(days);
    const double peak = 0.45 * static_cast<double>(days);
    const double width = std::max(1.0, 0.2 * static_cast<double>(days));
    for (std::size_t t = 0; t < days; ++t) {
        const double z = (static_cast<double>(t) - peak) / width;
        const double base = 3.0 + 15.0 * std::exp(-z * z);
        out[t] = multiplier * static_cast<int>(std::lround(base));
    }
    return out;
}

Dataset simulate_dataset(const RunConfig& config, const ModelParams& truth, std::span<const int> admissions,
                         const std::array<int, 3>& initial, std::uint64_t seed, const std::string& start_date)
{
    const auto first = parse_iso_date(start_date);
    if (!first) {
        fail(ErrorKind::InvalidArgument, "bad start date '" + start_date + "'");
    }
    truth.validate();
    Rng rng(seed);
    const auto counts = simulate_census(truth, make_inputs(config, admissions, initial), rng);

    Dataset ds;
    ds.admissions.assign(admissions.begin(), admissions.end());
    for (std::size_t t = 0; t < admissions.size(); ++t) {
        ds.dates.push_back(format_iso_date(*first + std::chrono::days(static_cast<long>(t))));
    }
    ds.observed = counts;
    for (const auto s : kAllStages) {
        ds.mapping.push_back({std::string(stage_name(s)), {s}});
    }
    ds.train_days = config.train_days ? std::min(*config.train_days, ds.num_days()) : ds.num_days();
    ds.validate();
    return ds;
}

ForecastRun run_forecast(const RunConfig& config, const Dataset& dataset, std::span<const ModelParams> samples,
                         std::uint64_t seed, const SimulationHooks& hooks)
{
    if (samples.empty()) {
        fail(ErrorKind::InvalidArgument, "no posterior samples");
    }
    ForecastRun run;
    const auto inputs = make_inputs(config, dataset.admissions, initial_counts(config, dataset));
    run.draws = forecast_counts(samples, inputs, dataset.mapping, seed, hooks);
    run.summary = summarize_percentiles(run.draws, config.percentile_levels);
    return run;
}

Evaluation run_evaluation(const RunConfig& config, const Dataset& dataset, std::span<const ModelParams> samples,
                          std::uint64_t seed)
{
    if (dataset.test_days() == 0) {
        fail(ErrorKind::Data, "dataset has no test period after the training split");
    }
    if (samples.empty()) {
        fail(ErrorKind::InvalidArgument, "no posterior samples");
    }
    const auto truth = dataset.test();
    const auto train = dataset.train();
    const auto inputs = make_inputs(config, dataset.admissions, initial_counts(config, dataset));
    const int test_start = static_cast<int>(dataset.train_days) + 1;

    Evaluation out;
    out.mae.push_back({"hospflow", mae_with_batches(samples, inputs, dataset.mapping, truth, config.batches,
                                                     derive_seed(seed, 0))});

    CensusSeries median(test_start, dataset.test_days(), {});
    for (const auto& label : truth.labels()) {
        median.add(label, median_forecast(train.at(label), dataset.test_days()));
    }
    out.mae.push_back({"median", mae_with_batches(std::span<const CensusSeries>(&median, 1), truth, config.batches,
                                                   derive_seed(seed, 1))});

    const std::pair<const char*, LrFeatureMode> lr_modes[] = {
        {"bayes_lr_day", LrFeatureMode::DayOnly},
        {"bayes_lr_day_admissions", LrFeatureMode::DayPlusAdmissions21},
    };
    std::uint64_t stream = 2;
    for (const auto& [name, mode] : lr_modes) {
        std::vector<CensusSeries> pool(config.lr_samples, CensusSeries(test_start, dataset.test_days(), {}));
        for (const auto& label : truth.labels()) {
            const auto lr = bayes_lr_forecast(train.at(label), dataset.admissions, mode, dataset.test_days(),
                                              config.lr_samples, derive_seed(seed, stream++));
            for (std::size_t s = 0; s < pool.size(); ++s) {
                pool[s].add(label, lr.samples[s]);
            }
        }
        out.mae.push_back({name, mae_with_batches(pool, truth, config.batches, derive_seed(seed, stream++))});
    }

    const auto draws = forecast_counts(samples, inputs, dataset.mapping, derive_seed(seed, stream++));
    for (const auto& label : truth.labels()) {
        for (const double target : config.coverage_targets) {
            out.coverage.push_back({label, target, coverage(draws, truth, label, target)});
        }
    }
    return out;
}

SimulationHooks scenario_hooks(const RunConfig& config, const Dataset& dataset)
{
    SimulationHooks hooks;
    if (config.admissions_scenario) {
        auto schedule = *config.admissions_scenario;
        if (config.admissions_scenario_start_date) {
            const auto day = dataset.day_of(*config.admissions_scenario_start_date);
            if (!day) {
                fail(ErrorKind::Config, "config key [admissions_scenario] start: date outside the dataset");
            }
            schedule.start_day = *day;
        }
        hooks.admissions = admissions_hook(schedule);
    }
    if (config.recovery_scenario) {
        hooks.duration = recovery_duration_hook(*config.recovery_scenario);
    }
    return hooks;
}

WhatIf run_whatif(const RunConfig& config, const Dataset& dataset, std::span<const ModelParams> samples,
                  std::uint64_t seed)
{
    if (!config.admissions_scenario && !config.recovery_scenario) {
        fail(ErrorKind::Config, "whatif needs an [admissions_scenario] or [recovery_scenario] section");
    }
    const auto base = run_forecast(config, dataset, samples, seed);
    const auto alt = run_forecast(config, dataset, samples, seed, scenario_hooks(config, dataset));
    std::vector<CensusSeries> diff;
    diff.reserve(base.draws.size());
    for (std::size_t i = 0; i < base.draws.size(); ++i) {
        diff.push_back(difference(alt.draws[i], base.draws[i]));
    }
    return {base.summary, alt.summary, summarize_percentiles(diff, config.percentile_levels)};
}

} // namespace hospflow
