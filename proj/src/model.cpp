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
#include "hospflow/model.hpp"

#include "hospflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hospflow
{

namespace
{

constexpr std::array<std::string_view, kNumParams> kParamNames = {
    "recovery_G",
    "recovery_I",
    "recovery_V",
    "early_death_G",
    "early_death_I",
    "mode_G_declining",
    "temperature_G_declining",
    "mode_G_recovering",
    "temperature_G_recovering",
    "mode_I_declining",
    "temperature_I_declining",
    "mode_I_recovering",
    "temperature_I_recovering",
    "mode_V_declining",
    "temperature_V_declining",
    "mode_V_recovering",
    "temperature_V_recovering",
};

// duration state (0..5) of a Mode/Temperature parameter
std::size_t duration_slot(ParamId id)
{
    return (static_cast<std::size_t>(id) - static_cast<std::size_t>(ParamId::ModeGDeclining)) / 2;
}

bool is_probability(double p)
{
    return std::isfinite(p) && p >= 0.0 && p <= 1.0;
}

} // namespace

std::string_view stage_name(Stage s)
{
    switch (s) {
    case Stage::G:
        return "G";
    case Stage::I:
        return "I";
    case Stage::V:
        return "V";
    case Stage::R:
        return "R";
    case Stage::T:
        return "T";
    }
    return "?";
}

std::optional<Stage> parse_stage(std::string_view name)
{
    for (Stage s : kAllStages) {
        if (stage_name(s) == name) {
            return s;
        }
    }
    return std::nullopt;
}

std::string_view health_name(Health h)
{
    return h == Health::Declining ? "declining" : "recovering";
}

void ModelParams::validate() const
{
    if (max_duration < 1) {
        fail(ErrorKind::Domain, "max_duration must be at least 1");
    }
    for (double p : transitions.recovery) {
        if (!is_probability(p)) {
            fail(ErrorKind::Domain, "recovery probability outside [0, 1]");
        }
    }
    for (double p : transitions.early_death) {
        if (!is_probability(p)) {
            fail(ErrorKind::Domain, "early-death probability outside [0, 1]");
        }
    }
    for (const auto& dp : durations) {
        if (!std::isfinite(dp.mode) || dp.mode <= 0.0 || dp.mode > max_duration) {
            fail(ErrorKind::Domain, "duration mode outside (0, max_duration]");
        }
        if (!std::isfinite(dp.temperature) || dp.temperature <= 0.0) {
            fail(ErrorKind::Domain, "duration temperature must be positive");
        }
    }
}

ParamKind param_kind(ParamId id)
{
    switch (id) {
    case ParamId::RecoveryG:
    case ParamId::RecoveryI:
    case ParamId::RecoveryV:
        return ParamKind::Recovery;
    case ParamId::EarlyDeathG:
    case ParamId::EarlyDeathI:
        return ParamKind::EarlyDeath;
    default:
        break;
    }
    return (static_cast<int>(id) - static_cast<int>(ParamId::ModeGDeclining)) % 2 == 0 ? ParamKind::Mode
                                                                                         : ParamKind::LogTemperature;
}

std::string_view param_name(ParamId id)
{
    return kParamNames[static_cast<std::size_t>(id)];
}

std::optional<ParamId> parse_param_name(std::string_view name)
{
    for (std::size_t i = 0; i < kNumParams; ++i) {
        if (kParamNames[i] == name) {
            return static_cast<ParamId>(i);
        }
    }
    return std::nullopt;
}

std::array<ParamId, kNumParams> all_params()
{
    std::array<ParamId, kNumParams> ids{};
    for (std::size_t i = 0; i < kNumParams; ++i) {
        ids[i] = static_cast<ParamId>(i);
    }
    return ids;
}

double get_value(const ModelParams& params, ParamId id)
{
    switch (param_kind(id)) {
    case ParamKind::Recovery:
        return params.transitions.recovery[static_cast<std::size_t>(id)];
    case ParamKind::EarlyDeath:
        return params.transitions.early_death[static_cast<std::size_t>(id) - 3];
    case ParamKind::Mode:
        return params.durations[duration_slot(id)].mode;
    case ParamKind::LogTemperature:
        return params.durations[duration_slot(id)].temperature;
    }
    return 0.0;
}

void set_value(ModelParams& params, ParamId id, double value)
{
    switch (param_kind(id)) {
    case ParamKind::Recovery:
        params.transitions.recovery[static_cast<std::size_t>(id)] = value;
        break;
    case ParamKind::EarlyDeath:
        params.transitions.early_death[static_cast<std::size_t>(id) - 3] = value;
        break;
    case ParamKind::Mode:
        params.durations[duration_slot(id)].mode = value;
        break;
    case ParamKind::LogTemperature:
        params.durations[duration_slot(id)].temperature = value;
        break;
    }
}

double get_coordinate(const ModelParams& params, ParamId id)
{
    const double v = get_value(params, id);
    return param_kind(id) == ParamKind::LogTemperature ? std::log10(v) : v;
}

void set_coordinate(ModelParams& params, ParamId id, double value)
{
    set_value(params, id, param_kind(id) == ParamKind::LogTemperature ? std::pow(10.0, value) : value);
}

std::vector<double> duration_pmf(const DurationParams& dp, int max_days)
{
    if (!std::isfinite(dp.mode) || dp.mode <= 0.0) {
        fail(ErrorKind::Domain, "duration mode must be positive and finite");
    }
    if (!std::isfinite(dp.temperature) || dp.temperature <= 0.0) {
        fail(ErrorKind::Domain, "duration temperature must be positive and finite");
    }
    if (max_days < 1) {
        fail(ErrorKind::Domain, "maximum duration must be at least 1 day");
    }
    const double log_mode = std::log(dp.mode);
    std::vector<double> logits(static_cast<std::size_t>(max_days));
    for (int d = 1; d <= max_days; ++d) {
        const double log_poisson = d * log_mode - dp.mode - std::lgamma(d + 1.0);
        logits[static_cast<std::size_t>(d - 1)] = log_poisson / dp.temperature;
    }
    const double top = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (double& x : logits) {
        x = std::exp(x - top);
        total += x;
    }
    for (double& x : logits) {
        x /= total;
    }
    return logits;
}

int sample_duration(std::span<const double> pmf, Rng& rng)
{
    if (pmf.empty()) {
        fail(ErrorKind::Domain, "empty duration pmf");
    }
    const double u = uniform01(rng);
    double acc = 0.0;
    int last_positive = 1;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        if (pmf[i] > 0.0) {
            last_positive = static_cast<int>(i) + 1;
        }
        acc += pmf[i];
        if (u < acc) {
            return static_cast<int>(i) + 1;
        }
    }
    return last_positive;
}

Stage next_stage(Stage s, Health h)
{
    if (is_terminal(s)) {
        fail(ErrorKind::Domain, "next_stage called on a terminal stage");
    }
    if (h == Health::Declining) {
        switch (s) {
        case Stage::G:
            return Stage::I;
        case Stage::I:
            return Stage::V;
        default:
            return Stage::T;
        }
    }
    switch (s) {
    case Stage::V:
        return Stage::I;
    case Stage::I:
        return Stage::G;
    default:
        return Stage::R;
    }
}

int PatientTrajectory::length_of_stay() const
{
    int total = 0;
    for (const auto& seg : segments) {
        total += seg.duration;
    }
    return total;
}

TrajectorySampler::TrajectorySampler(const ModelParams& params)
    : m_params(params)
{
    m_params.validate();
    for (Stage s : kIntermediateStages) {
        for (Health h : {Health::Declining, Health::Recovering}) {
            auto pmf = duration_pmf(m_params.duration(s, h), m_params.max_duration);
            std::partial_sum(pmf.begin(), pmf.end(), pmf.begin());
            m_cdf[state_index(s, h)] = std::move(pmf);
        }
    }
}

int TrajectorySampler::draw_duration(Stage s, Health h, Rng& rng, const DurationHook* hook) const
{
    const auto& cdf = m_cdf[state_index(s, h)];
    const double u = uniform01(rng);
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) {
        // u beyond the rounded total; take the last day with mass
        it = std::prev(cdf.end());
        while (it != cdf.begin() && *it == *std::prev(it)) {
            --it;
        }
    }
    const int days = static_cast<int>(it - cdf.begin()) + 1;
    return hook != nullptr && *hook ? (*hook)(s, h, days, rng) : days;
}

PatientTrajectory TrajectorySampler::sample(int admission_day, Stage start_stage, Rng& rng,
                                            const DurationHook* hook) const
{
    if (is_terminal(start_stage)) {
        fail(ErrorKind::Domain, "trajectories must start in an intermediate stage");
    }
    PatientTrajectory traj;
    traj.admission_day = admission_day;
    traj.terminal = walk(start_stage, rng, hook,
                         [&](Stage s, Health h, int days) { traj.segments.push_back({s, h, days}); });
    return traj;
}

PatientTrajectory sample_trajectory(const ModelParams& params, int admission_day, Stage start_stage, Rng& rng,
                                    const DurationHook& duration_hook)
{
    TrajectorySampler sampler(params);
    return sampler.sample(admission_day, start_stage, rng, &duration_hook);
}

CensusSeries::CensusSeries(int start_day, std::size_t num_days, std::vector<std::string> labels)
    : m_start_day(start_day)
    , m_num_days(num_days)
    , m_labels(std::move(labels))
    , m_values(m_labels.size(), std::vector<double>(num_days, 0.0))
{
}

bool CensusSeries::has_label(std::string_view label) const
{
    return std::find(m_labels.begin(), m_labels.end(), label) != m_labels.end();
}

std::size_t CensusSeries::index_of(std::string_view label) const
{
    const auto it = std::find(m_labels.begin(), m_labels.end(), label);
    if (it == m_labels.end()) {
        fail(ErrorKind::InvalidArgument, "census series has no label '" + std::string(label) + "'");
    }
    return static_cast<std::size_t>(it - m_labels.begin());
}

std::span<const double> CensusSeries::at(std::string_view label) const
{
    return m_values[index_of(label)];
}

std::span<double> CensusSeries::at(std::string_view label)
{
    return m_values[index_of(label)];
}

void CensusSeries::add(std::string label, std::vector<double> values)
{
    if (has_label(label)) {
        fail(ErrorKind::InvalidArgument, "duplicate label '" + label + "'");
    }
    if (m_labels.empty() && m_num_days == 0) {
        m_num_days = values.size();
    }
    if (values.size() != m_num_days) {
        fail(ErrorKind::InvalidArgument, "series '" + label + "' has the wrong length");
    }
    m_labels.push_back(std::move(label));
    m_values.push_back(std::move(values));
}

CensusSeries CensusSeries::slice(int first_day, std::size_t count) const
{
    if (first_day < m_start_day ||
        static_cast<std::size_t>(first_day - m_start_day) + count > m_num_days) {
        fail(ErrorKind::InvalidArgument, "slice outside the series horizon");
    }
    CensusSeries out(first_day, count, m_labels);
    const auto offset = static_cast<std::size_t>(first_day - m_start_day);
    for (std::size_t k = 0; k < m_labels.size(); ++k) {
        std::copy_n(m_values[k].begin() + static_cast<std::ptrdiff_t>(offset), count, out.m_values[k].begin());
    }
    return out;
}

namespace
{

std::vector<std::string> stage_labels()
{
    std::vector<std::string> labels;
    for (Stage s : kAllStages) {
        labels.emplace_back(stage_name(s));
    }
    return labels;
}

} // namespace

FullCensus simulate_census_full(const ModelParams& params, const SimulationInputs& inputs, Rng& rng,
                                const SimulationHooks& hooks)
{
    if (!(inputs.scale >= 1.0) || !std::isfinite(inputs.scale)) {
        fail(ErrorKind::InvalidArgument, "population scale must be a finite value >= 1");
    }
    for (int a : inputs.admissions) {
        if (a < 0) {
            fail(ErrorKind::InvalidArgument, "admissions must be non-negative");
        }
    }
    for (int c : inputs.initial_counts) {
        if (c < 0) {
            fail(ErrorKind::InvalidArgument, "initial counts must be non-negative");
        }
    }
    const TrajectorySampler sampler(params);
    const DurationHook* duration_hook = hooks.duration ? &hooks.duration : nullptr;

    std::vector<int> admissions = inputs.admissions;
    if (hooks.admissions) {
        admissions = hooks.admissions(inputs.admissions, rng);
        if (admissions.size() != inputs.admissions.size()) {
            fail(ErrorKind::InvalidArgument, "admissions hook changed the horizon");
        }
    }

    const bool warm = std::any_of(inputs.initial_counts.begin(), inputs.initial_counts.end(),
                                  [](int c) { return c > 0; });
    const int warm_days = warm ? std::max(1, inputs.warm_start_days) : 0;
    const int first_day = warm ? -warm_days : 1;
    const int horizon = static_cast<int>(admissions.size());
    const auto num_days = static_cast<std::size_t>(horizon - first_day + 1);

    // difference arrays for occupancy, direct counts for terminal incidents
    std::array<std::vector<long long>, 3> occupancy_delta;
    for (auto& v : occupancy_delta) {
        v.assign(num_days + 1, 0);
    }
    std::array<std::vector<long long>, 2> incident;
    for (auto& v : incident) {
        v.assign(num_days, 0);
    }
    std::vector<long long> started(num_days, 0);
    const long long limit = static_cast<long long>(num_days);

    auto admit = [&](int day, Stage start_stage) {
        long long cursor = day - first_day;
        started[static_cast<std::size_t>(cursor)] += 1;
        const Stage terminal = sampler.walk(start_stage, rng, duration_hook, [&](Stage s, Health, int days) {
            if (cursor < limit) {
                auto& delta = occupancy_delta[stage_index(s)];
                delta[static_cast<std::size_t>(cursor)] += 1;
                delta[static_cast<std::size_t>(std::min(cursor + days, limit))] -= 1;
            }
            cursor += days;
        });
        if (cursor < limit) {
            incident[terminal == Stage::R ? 0 : 1][static_cast<std::size_t>(cursor)] += 1;
        }
    };

    auto scaled = [&](double expected) {
        return inputs.scale == 1.0 ? static_cast<int>(std::llround(expected))
                                   : stochastic_round(expected / inputs.scale, rng);
    };

    if (warm) {
        for (Stage s : kIntermediateStages) {
            const double inflation = (s == Stage::G || s == Stage::V) ? inputs.warm_start_inflation : 1.0;
            // round half up, then thin by the population scale
            const double standing = std::floor(inputs.initial_counts[stage_index(s)] * inflation + 0.5);
            const int n = scaled(standing);
            for (int i = 0; i < n; ++i) {
                admit(first_day + i % warm_days, s);
            }
        }
    }
    for (int day = 1; day <= horizon; ++day) {
        const int n = scaled(static_cast<double>(admissions[static_cast<std::size_t>(day - 1)]));
        for (int i = 0; i < n; ++i) {
            admit(day, Stage::G);
        }
    }

    FullCensus out{CensusSeries(first_day, num_days, stage_labels()), std::vector<long long>(num_days, 0)};
    for (Stage s : kIntermediateStages) {
        auto column = out.counts.column(stage_index(s));
        long long running = 0;
        for (std::size_t i = 0; i < num_days; ++i) {
            running += occupancy_delta[stage_index(s)][i];
            column[i] = static_cast<double>(running);
        }
    }
    for (std::size_t i = 0; i < num_days; ++i) {
        out.counts.column(3)[i] = static_cast<double>(incident[0][i]);
        out.counts.column(4)[i] = static_cast<double>(incident[1][i]);
    }
    std::partial_sum(started.begin(), started.end(), out.started.begin());
    return out;
}

CensusSeries simulate_census(const ModelParams& params, const SimulationInputs& inputs, Rng& rng,
                             const SimulationHooks& hooks)
{
    auto full = simulate_census_full(params, inputs, rng, hooks);
    CensusSeries out = full.counts.slice(1, inputs.admissions.size());
    if (inputs.scale != 1.0) {
        for (std::size_t k = 0; k < out.labels().size(); ++k) {
            for (double& x : out.column(k)) {
                x = std::round(x * inputs.scale);
            }
        }
    }
    return out;
}

std::optional<std::vector<Stage>> parse_stage_set(std::string_view label)
{
    std::vector<Stage> stages;
    std::size_t pos = 0;
    while (pos <= label.size()) {
        const std::size_t plus = label.find('+', pos);
        const auto token = label.substr(pos, plus == std::string_view::npos ? std::string_view::npos : plus - pos);
        const auto stage = parse_stage(token);
        if (!stage || std::find(stages.begin(), stages.end(), *stage) != stages.end()) {
            return std::nullopt;
        }
        stages.push_back(*stage);
        if (plus == std::string_view::npos) {
            break;
        }
        pos = plus + 1;
    }
    return stages;
}

CensusSeries aggregate_counts(const CensusSeries& counts, std::span<const LabelMapping> mapping)
{
    CensusSeries out(counts.start_day(), counts.num_days(), {});
    for (const auto& m : mapping) {
        if (m.stages.empty()) {
            fail(ErrorKind::Config, "label '" + m.label + "' maps to no stages");
        }
        std::vector<double> sum(counts.num_days(), 0.0);
        for (Stage s : m.stages) {
            if (!counts.has_label(stage_name(s))) {
                fail(ErrorKind::Config,
                     "label '" + m.label + "' uses stage " + std::string(stage_name(s)) + " missing from the counts");
            }
            const auto col = counts.at(stage_name(s));
            for (std::size_t i = 0; i < sum.size(); ++i) {
                sum[i] += col[i];
            }
        }
        out.add(m.label, std::move(sum));
    }
    return out;
}

} // namespace hospflow
