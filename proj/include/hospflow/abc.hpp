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
#ifndef HOSPFLOW_ABC_HPP
#define HOSPFLOW_ABC_HPP

#include "hospflow/model.hpp"
#include "hospflow/priors.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hospflow
{

/// Weights w_tk = v_t * u_k of the distance. Stage weights are keyed by
/// observed label; time weights interpolate linearly between the endpoints.
struct DistanceWeights
{
    std::vector<std::pair<std::string, double>> stage;
    double time_start = 0.5;
    double time_end = 1.5;

    double stage_weight(std::string_view label) const;
    double time_weight(std::size_t day_index, std::size_t num_days) const;

    /// Checks the weights cover `labels` and average to one over them and over time.
    void validate(std::span<const std::string> labels) const;

    /// Default stage weights for a set of observed labels: later stages weigh
    /// more. Unknown combinations get uniform weights.
    static DistanceWeights preset(std::span<const std::string> labels);
};

/// Weighted, max-normalised mean absolute error in [0, 1]. A term where both
/// counts are zero contributes nothing.
double distance(const CensusSeries& observed, const CensusSeries& simulated, const DistanceWeights& weights);

struct EpsilonSchedule
{
    double eps_init = 0.7;
    /// Multiplicative decay per single-parameter proposal; unset means "decay
    /// to 0.05 over the burn-in when nothing floors it".
    std::optional<double> decay;
    double bump = 0.05;
    /// Sweeps between bumps; 0 means burn_in_sweeps / 4.
    std::uint64_t bump_interval_sweeps = 0;
    std::uint64_t burn_in_sweeps = 24000;
    double sampling_raise = 0.15;

    double resolved_decay(std::size_t proposals_per_sweep) const;
    std::uint64_t resolved_bump_interval() const;
    void validate() const;
};

enum class Phase : std::uint8_t
{
    BurnIn,
    Sampling,
};

struct ChainState
{
    ModelParams params;
    double log_prior = 0.0;
    double eps = 0.7;
    /// Smallest tolerance reached during burn-in.
    double best_eps = 0.7;
    double last_accepted_distance = 1.0;
    Phase phase = Phase::BurnIn;
    std::uint64_t proposals = 0;
    std::uint64_t sweeps = 0;
    std::vector<ModelParams> samples;
    std::array<std::uint64_t, kNumParams> proposed{};
    std::array<std::uint64_t, kNumParams> accepted{};
    std::uint64_t simulation_failures = 0;
};

/// Applies one burn-in tolerance update after a proposal: exponential decay
/// floored at the last accepted distance, plus the periodic bump.
void epsilon_step(const EpsilonSchedule& schedule, ChainState& state, std::size_t proposals_per_sweep);

/// Freezes the tolerance at the best burn-in value plus the sampling raise.
void enter_sampling(const EpsilonSchedule& schedule, ChainState& state);

struct AbcProblem
{
    /// Observed training counts, one column per label, days 1..T.
    CensusSeries observed;
    /// Stages summed into each observed label.
    std::vector<LabelMapping> mapping;
    /// Admissions and warm start over the training days.
    SimulationInputs inputs;
    PriorSpec prior;
    ProposalSpec proposal;
    DistanceWeights weights;
    EpsilonSchedule schedule;

    void validate() const;
};

/// Parameters visited by a sweep: all 17 in order, or the 11 non-temperature
/// ones in Poisson mode.
std::vector<ParamId> visit_order(const PriorSpec& prior);

/// Simulates the training period under `params` and returns its distance to
/// the observed counts.
double simulated_distance(const AbcProblem& problem, const ModelParams& params, Rng& rng);

/// A proposal that passed the distance check.
struct DistanceEvent
{
    std::uint64_t proposal;
    ParamId param;
    double distance;
    bool accepted;
};

struct SweepRecord
{
    std::uint64_t sweep;
    Phase phase;
    double eps;
    double last_accepted_distance;
    std::uint32_t passed;
    std::uint32_t accepted;
};

/// One pass over every parameter with two-stage acceptance.
SweepRecord abc_sweep(ChainState& state, const AbcProblem& problem, Rng& rng,
                      std::vector<DistanceEvent>* events = nullptr);

struct ChainResult
{
    std::vector<ModelParams> samples;
    double final_eps = 1.0;
    double best_burn_in_eps = 1.0;
    double final_distance = 1.0;
    std::vector<SweepRecord> trace;
    std::vector<DistanceEvent> events;
    std::array<std::uint64_t, kNumParams> proposed{};
    std::array<std::uint64_t, kNumParams> accepted{};
    std::uint64_t simulation_failures = 0;
};

struct ChainOptions
{
    std::size_t n_samples = 200;
    std::size_t thin = 1;
    bool record_events = false;
};

/// Burn-in then sampling, initialised from a prior draw. Deterministic for a seed.
ChainResult run_chain(const AbcProblem& problem, const ChainOptions& options, std::uint64_t seed);

/// Pools samples from chains whose final tolerance is within `tolerance` of the
/// smallest one. Throws a convergence error when nothing survives.
std::vector<ModelParams> ensemble(std::span<const ChainResult> chains, double tolerance,
                                  std::vector<std::size_t>* included = nullptr);

struct FitOptions
{
    std::size_t n_chains = 10;
    ChainOptions chain;
    double ensemble_tolerance = 0.1;
    /// Worker threads; 0 uses the hardware concurrency.
    unsigned threads = 0;
};

struct FitResult
{
    std::vector<ChainResult> chains;
    std::vector<std::size_t> included;
    std::vector<ModelParams> samples;
};

/// Runs independent chains in parallel; chain k is seeded with derive_seed(seed, k).
std::vector<ChainResult> fit_chains(const AbcProblem& problem, const FitOptions& options, std::uint64_t seed);

/// fit_chains followed by ensemble.
FitResult fit(const AbcProblem& problem, const FitOptions& options, std::uint64_t seed);

} // namespace hospflow

#endif // HOSPFLOW_ABC_HPP
