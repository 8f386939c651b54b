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
#ifndef HOSPFLOW_MODEL_HPP
#define HOSPFLOW_MODEL_HPP

#include "hospflow/random.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hospflow
{

/// Stage of care. G, I and V are intermediate; R and T are absorbing.
enum class Stage : std::uint8_t
{
    G, ///< general ward
    I, ///< ICU, off ventilator
    V, ///< ICU, on ventilator
    R, ///< recovered (discharged)
    T, ///< death
};

inline constexpr std::array<Stage, 3> kIntermediateStages = {Stage::G, Stage::I, Stage::V};
inline constexpr std::array<Stage, 5> kAllStages = {Stage::G, Stage::I, Stage::V, Stage::R, Stage::T};

constexpr bool is_terminal(Stage s)
{
    return s == Stage::R || s == Stage::T;
}

/// Index 0..2 of an intermediate stage.
constexpr std::size_t stage_index(Stage s)
{
    return static_cast<std::size_t>(s);
}

std::string_view stage_name(Stage s);
std::optional<Stage> parse_stage(std::string_view name);

enum class Health : std::uint8_t
{
    Declining = 0,
    Recovering = 1,
};

std::string_view health_name(Health h);

/// Index 0..5 of an intermediate (stage, health) state: G0, G1, I0, I1, V0, V1.
constexpr std::size_t state_index(Stage s, Health h)
{
    return 2 * stage_index(s) + static_cast<std::size_t>(h);
}

/// Mode location (days) and temperature of one duration distribution.
struct DurationParams
{
    double mode = 8.0;
    double temperature = 1.0;

    bool operator==(const DurationParams&) const = default;
};

/// Recovery probabilities per intermediate stage and early-death
/// probabilities for G and I. A declining patient leaving V always dies.
struct TransitionParams
{
    std::array<double, 3> recovery{};
    std::array<double, 2> early_death{};

    bool operator==(const TransitionParams&) const = default;
};

struct ModelParams
{
    TransitionParams transitions;
    std::array<DurationParams, 6> durations{};
    int max_duration = 22;

    const DurationParams& duration(Stage s, Health h) const
    {
        return durations[state_index(s, h)];
    }
    DurationParams& duration(Stage s, Health h)
    {
        return durations[state_index(s, h)];
    }

    /// Throws a domain error when any field is outside its support.
    void validate() const;

    bool operator==(const ModelParams&) const = default;
};

/// The 17 learnable scalars, in the order the sampler visits them.
enum class ParamId : std::uint8_t
{
    RecoveryG,
    RecoveryI,
    RecoveryV,
    EarlyDeathG,
    EarlyDeathI,
    ModeGDeclining,
    TemperatureGDeclining,
    ModeGRecovering,
    TemperatureGRecovering,
    ModeIDeclining,
    TemperatureIDeclining,
    ModeIRecovering,
    TemperatureIRecovering,
    ModeVDeclining,
    TemperatureVDeclining,
    ModeVRecovering,
    TemperatureVRecovering,
};

inline constexpr std::size_t kNumParams = 17;

enum class ParamKind : std::uint8_t
{
    Recovery,
    EarlyDeath,
    Mode,
    LogTemperature,
};

ParamKind param_kind(ParamId id);
std::string_view param_name(ParamId id);
std::optional<ParamId> parse_param_name(std::string_view name);
std::array<ParamId, kNumParams> all_params();

/// Value the sampler works with for a parameter. Temperatures are handled on
/// the log10 scale; every other parameter is returned as stored.
double get_coordinate(const ModelParams& params, ParamId id);
void set_coordinate(ModelParams& params, ParamId id, double value);

/// Plain value of a parameter (temperature itself, not its log).
double get_value(const ModelParams& params, ParamId id);
void set_value(ModelParams& params, ParamId id, double value);

/// Duration pmf over 1..max_days: softmax of log PoiPMF(d | mode) / temperature.
std::vector<double> duration_pmf(const DurationParams& dp, int max_days);

/// Draws d in [1, pmf.size()] with probability pmf[d - 1].
int sample_duration(std::span<const double> pmf, Rng& rng);

/// Deterministic successor of an intermediate stage given its health.
Stage next_stage(Stage s, Health h);

struct Segment
{
    Stage stage;
    Health health;
    int duration;

    bool operator==(const Segment&) const = default;
};

struct PatientTrajectory
{
    int admission_day = 0;
    std::vector<Segment> segments;
    Stage terminal = Stage::R;

    int length_of_stay() const;
};

/// Optional transform of each sampled segment duration.
using DurationHook = std::function<int(Stage, Health, int, Rng&)>;
/// Optional transform of the (unscaled) daily admissions stream.
using AdmissionsHook = std::function<std::vector<int>(std::span<const int>, Rng&)>;

/// Samples patient trajectories for one parameter set. Holds the cumulative
/// duration tables so a simulation builds them once.
class TrajectorySampler
{
public:
    explicit TrajectorySampler(const ModelParams& params);

    PatientTrajectory sample(int admission_day, Stage start_stage, Rng& rng,
                             const DurationHook* hook = nullptr) const;

    /// Walks one trajectory without allocating; `visit(stage, health, days)`
    /// is called for every segment. Returns the terminal stage.
    template <class Visitor>
    Stage walk(Stage start_stage, Rng& rng, const DurationHook* hook, Visitor&& visit) const;

    const ModelParams& params() const
    {
        return m_params;
    }

private:
    int draw_duration(Stage s, Health h, Rng& rng, const DurationHook* hook) const;

    ModelParams m_params;
    std::array<std::vector<double>, 6> m_cdf;
};

template <class Visitor>
Stage TrajectorySampler::walk(Stage start_stage, Rng& rng, const DurationHook* hook, Visitor&& visit) const
{
    const auto& tr = m_params.transitions;
    Stage stage = start_stage;
    Health health = bernoulli(tr.recovery[stage_index(stage)], rng) ? Health::Recovering : Health::Declining;
    for (;;) {
        visit(stage, health, draw_duration(stage, health, rng, hook));
        if (health == Health::Recovering) {
            stage = next_stage(stage, health);
            if (stage == Stage::R) {
                return Stage::R;
            }
            continue;
        }
        if (stage == Stage::V) {
            return Stage::T;
        }
        if (bernoulli(tr.early_death[stage_index(stage)], rng)) {
            return Stage::T;
        }
        stage = next_stage(stage, health);
        health = bernoulli(tr.recovery[stage_index(stage)], rng) ? Health::Recovering : Health::Declining;
    }
}

PatientTrajectory sample_trajectory(const ModelParams& params, int admission_day, Stage start_stage,
                                    Rng& rng, const DurationHook& duration_hook = {});

/// Daily counts per label. Intermediate stages are occupancy, R and T are
/// daily incident counts. Day `start_day + i` is stored at index i.
class CensusSeries
{
public:
    CensusSeries() = default;
    CensusSeries(int start_day, std::size_t num_days, std::vector<std::string> labels);

    int start_day() const
    {
        return m_start_day;
    }
    std::size_t num_days() const
    {
        return m_num_days;
    }
    const std::vector<std::string>& labels() const
    {
        return m_labels;
    }
    bool has_label(std::string_view label) const;

    std::span<const double> at(std::string_view label) const;
    std::span<double> at(std::string_view label);
    std::span<const double> column(std::size_t k) const
    {
        return m_values[k];
    }
    std::span<double> column(std::size_t k)
    {
        return m_values[k];
    }

    /// Adds a label with the given values; length must match.
    void add(std::string label, std::vector<double> values);

    /// Days [first_day, first_day + count) as a new series.
    CensusSeries slice(int first_day, std::size_t count) const;

    bool operator==(const CensusSeries&) const = default;

private:
    std::size_t index_of(std::string_view label) const;

    int m_start_day = 1;
    std::size_t m_num_days = 0;
    std::vector<std::string> m_labels;
    std::vector<std::vector<double>> m_values;
};

/// Inputs of one census simulation over days 1..admissions.size().
struct SimulationInputs
{
    std::vector<int> admissions;
    /// Standing population in G, I, V at day 0, admitted over the warm-start days.
    std::array<int, 3> initial_counts{};
    /// Simulate 1/scale of the patients and multiply counts by scale.
    double scale = 1.0;
    double warm_start_inflation = 1.03;
    int warm_start_days = 5;
};

struct SimulationHooks
{
    DurationHook duration;
    AdmissionsHook admissions;
};

/// Simulates daily counts for G, I, V, R, T over days 1..H.
CensusSeries simulate_census(const ModelParams& params, const SimulationInputs& inputs, Rng& rng,
                             const SimulationHooks& hooks = {});

/// Same simulation, but unscaled counts kept from the first warm-start day
/// together with the cumulative number of started admissions per day.
struct FullCensus
{
    CensusSeries counts;
    std::vector<long long> started;
};
FullCensus simulate_census_full(const ModelParams& params, const SimulationInputs& inputs, Rng& rng,
                                const SimulationHooks& hooks = {});

/// One observed label and the stages summed into it.
struct LabelMapping
{
    std::string label;
    std::vector<Stage> stages;
};

/// Parses labels of the form "G", "I+V", "G+I+V".
std::optional<std::vector<Stage>> parse_stage_set(std::string_view label);

CensusSeries aggregate_counts(const CensusSeries& counts, std::span<const LabelMapping> mapping);

} // namespace hospflow

#endif // HOSPFLOW_MODEL_HPP
