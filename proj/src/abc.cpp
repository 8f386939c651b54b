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
#include "hospflow/abc.hpp"

#include "hospflow/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <thread>

namespace hospflow
{

double DistanceWeights::stage_weight(std::string_view label) const
{
    for (const auto& [name, w] : stage) {
        if (name == label) {
            return w;
        }
    }
    fail(ErrorKind::Config, "no distance weight for label '" + std::string(label) + "'");
}

double DistanceWeights::time_weight(std::size_t day_index, std::size_t num_days) const
{
    if (num_days <= 1) {
        return 0.5 * (time_start + time_end);
    }
    const double frac = static_cast<double>(day_index) / static_cast<double>(num_days - 1);
    return time_start + frac * (time_end - time_start);
}

void DistanceWeights::validate(std::span<const std::string> labels) const
{
    if (labels.empty()) {
        fail(ErrorKind::Config, "distance needs at least one observed label");
    }
    double total = 0.0;
    for (const auto& label : labels) {
        const double w = stage_weight(label);
        if (!(w > 0.0) || !std::isfinite(w)) {
            fail(ErrorKind::Config, "distance weight for '" + label + "' must be positive");
        }
        total += w;
    }
    if (std::abs(total / static_cast<double>(labels.size()) - 1.0) > 1e-9) {
        fail(ErrorKind::Config, "stage weights must average to 1 over the observed labels");
    }
    if (!(time_start > 0.0) || !(time_end > 0.0) || std::abs(0.5 * (time_start + time_end) - 1.0) > 1e-9) {
        fail(ErrorKind::Config, "time weights must be positive and average to 1");
    }
}

DistanceWeights DistanceWeights::preset(std::span<const std::string> labels)
{
    using Preset = std::map<std::string, double>;
    static const std::vector<Preset> presets = {
        {{"G", 0.7}, {"I", 0.9}, {"V", 1.1}, {"T", 1.3}},
        {{"G", 0.8}, {"I+V", 1.0}, {"T", 1.2}},
        {{"G+I+V", 0.8}, {"T", 1.2}},
        {{"R", 0.8}, {"G+I+V", 1.0}, {"T", 1.2}},
        {{"G", 0.8}, {"R", 0.9}, {"I", 1.0}, {"V", 1.1}, {"T", 1.2}},
    };
    const std::set<std::string> wanted(labels.begin(), labels.end());
    DistanceWeights w;
    for (const auto& preset : presets) {
        std::set<std::string> keys;
        for (const auto& [k, v] : preset) {
            keys.insert(k);
        }
        if (keys == wanted) {
            for (const auto& label : labels) {
                w.stage.emplace_back(label, preset.at(label));
            }
            return w;
        }
    }
    for (const auto& label : labels) {
        w.stage.emplace_back(label, 1.0);
    }
    return w;
}

double distance(const CensusSeries& observed, const CensusSeries& simulated, const DistanceWeights& weights)
{
    const auto& labels = observed.labels();
    if (labels.empty() || observed.num_days() == 0) {
        fail(ErrorKind::InvalidArgument, "distance needs at least one label and one day");
    }
    if (simulated.num_days() != observed.num_days()) {
        fail(ErrorKind::InvalidArgument, "observed and simulated series differ in length");
    }
    const std::size_t num_days = observed.num_days();
    double total = 0.0;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (!simulated.has_label(labels[k])) {
            fail(ErrorKind::InvalidArgument, "simulated series lacks label '" + labels[k] + "'");
        }
        const double u = weights.stage_weight(labels[k]);
        const auto y = observed.column(k);
        const auto y_sim = simulated.at(labels[k]);
        for (std::size_t t = 0; t < num_days; ++t) {
            const double top = std::max(y[t], y_sim[t]);
            if (top <= 0.0) {
                continue;
            }
            total += u * weights.time_weight(t, num_days) * std::abs(y[t] - y_sim[t]) / top;
        }
    }
    const double d = total / static_cast<double>(labels.size() * num_days);
    return std::clamp(d, 0.0, 1.0);
}

double EpsilonSchedule::resolved_decay(std::size_t proposals_per_sweep) const
{
    if (decay) {
        return *decay;
    }
    const double target = 0.05;
    if (eps_init <= target || burn_in_sweeps == 0 || proposals_per_sweep == 0) {
        return 1.0;
    }
    const double steps = static_cast<double>(burn_in_sweeps) * static_cast<double>(proposals_per_sweep);
    return std::pow(target / eps_init, 1.0 / steps);
}

std::uint64_t EpsilonSchedule::resolved_bump_interval() const
{
    return bump_interval_sweeps > 0 ? bump_interval_sweeps : burn_in_sweeps / 4;
}

void EpsilonSchedule::validate() const
{
    if (!(eps_init > 0.0) || eps_init > 1.0) {
        fail(ErrorKind::Config, "eps_init must lie in (0, 1]");
    }
    if (decay && (!(*decay > 0.0) || *decay > 1.0)) {
        fail(ErrorKind::Config, "decay must lie in (0, 1]");
    }
    if (!(bump >= 0.0) || bump > 1.0) {
        fail(ErrorKind::Config, "bump must lie in [0, 1]");
    }
    if (!(sampling_raise >= 0.0) || sampling_raise > 1.0) {
        fail(ErrorKind::Config, "sampling_raise must lie in [0, 1]");
    }
}

void epsilon_step(const EpsilonSchedule& schedule, ChainState& state, std::size_t proposals_per_sweep)
{
    if (state.phase != Phase::BurnIn) {
        return;
    }
    state.eps = std::max(schedule.resolved_decay(proposals_per_sweep) * state.eps, state.last_accepted_distance);
    const std::uint64_t interval = schedule.resolved_bump_interval() * proposals_per_sweep;
    if (interval > 0 && state.proposals > 0 && state.proposals % interval == 0) {
        state.eps = std::min(1.0, state.eps + schedule.bump);
    }
    state.eps = std::min(state.eps, 1.0);
    state.best_eps = std::min(state.best_eps, state.eps);
}

void enter_sampling(const EpsilonSchedule& schedule, ChainState& state)
{
    state.phase = Phase::Sampling;
    state.eps = std::min(1.0, state.best_eps + schedule.sampling_raise);
}

void AbcProblem::validate() const
{
    if (observed.num_days() != inputs.admissions.size()) {
        fail(ErrorKind::InvalidArgument, "observed counts and admissions cover different horizons");
    }
    if (mapping.size() != observed.labels().size()) {
        fail(ErrorKind::Config, "every observed label needs a stage mapping");
    }
    for (std::size_t k = 0; k < mapping.size(); ++k) {
        if (mapping[k].label != observed.labels()[k]) {
            fail(ErrorKind::Config, "stage mapping order differs from the observed labels");
        }
    }
    prior.validate();
    proposal.validate();
    schedule.validate();
    weights.validate(observed.labels());
    if (prior.max_duration != proposal.max_duration) {
        fail(ErrorKind::Config, "prior and proposal disagree on the maximum duration");
    }
}

std::vector<ParamId> visit_order(const PriorSpec& prior)
{
    std::vector<ParamId> order;
    for (ParamId id : all_params()) {
        if (prior.poisson_mode && param_kind(id) == ParamKind::LogTemperature) {
            continue;
        }
        if (prior.max_duration == 1 && param_kind(id) == ParamKind::Mode) {
            continue;
        }
        order.push_back(id);
    }
    return order;
}

double simulated_distance(const AbcProblem& problem, const ModelParams& params, Rng& rng)
{
    const CensusSeries sim = simulate_census(params, problem.inputs, rng);
    return distance(problem.observed, aggregate_counts(sim, problem.mapping), problem.weights);
}

SweepRecord abc_sweep(ChainState& state, const AbcProblem& problem, Rng& rng, std::vector<DistanceEvent>* events)
{
    const auto order = visit_order(problem.prior);
    SweepRecord record{state.sweeps, state.phase, 0.0, 0.0, 0, 0};
    for (ParamId id : order) {
        const auto slot = static_cast<std::size_t>(id);
        const ParamKind kind = param_kind(id);
        const double current = get_coordinate(state.params, id);
        const double candidate = propose(kind, current, problem.proposal, rng);
        ModelParams next = state.params;
        set_coordinate(next, id, candidate);
        ++state.proposed[slot];
        ++state.proposals;

        const double log_prior = prior_log_density(next, problem.prior);
        if (std::isfinite(log_prior)) {
            double d = std::numeric_limits<double>::infinity();
            try {
                d = simulated_distance(problem, next, rng);
            }
            catch (const Error&) {
                ++state.simulation_failures;
            }
            if (d <= state.eps) {
                ++record.passed;
                const double log_alpha = log_prior - state.log_prior +
                                         proposal_log_density(kind, candidate, current, problem.proposal) -
                                         proposal_log_density(kind, current, candidate, problem.proposal);
                const bool accept = log_alpha >= 0.0 || std::log(uniform01(rng)) < log_alpha;
                if (accept) {
                    state.params = next;
                    state.log_prior = log_prior;
                    state.last_accepted_distance = d;
                    ++state.accepted[slot];
                    ++record.accepted;
                }
                if (events) {
                    events->push_back({state.proposals, id, d, accept});
                }
            }
        }
        epsilon_step(problem.schedule, state, order.size());
    }
    ++state.sweeps;
    record.eps = state.eps;
    record.last_accepted_distance = state.last_accepted_distance;
    return record;
}

ChainResult run_chain(const AbcProblem& problem, const ChainOptions& options, std::uint64_t seed)
{
    problem.validate();
    if (options.n_samples < 1 || options.thin < 1) {
        fail(ErrorKind::InvalidArgument, "a chain needs n_samples >= 1 and thin >= 1");
    }
    Rng rng(seed);
    ChainState state;
    state.params = sample_prior(problem.prior, rng);
    state.log_prior = prior_log_density(state.params, problem.prior);
    state.eps = problem.schedule.eps_init;
    state.best_eps = problem.schedule.eps_init;
    state.last_accepted_distance = simulated_distance(problem, state.params, rng);

    ChainResult result;
    std::vector<DistanceEvent>* events = options.record_events ? &result.events : nullptr;
    for (std::uint64_t s = 0; s < problem.schedule.burn_in_sweeps; ++s) {
        result.trace.push_back(abc_sweep(state, problem, rng, events));
    }
    result.best_burn_in_eps = state.best_eps;
    enter_sampling(problem.schedule, state);
    while (state.samples.size() < options.n_samples) {
        result.trace.push_back(abc_sweep(state, problem, rng, events));
        if ((state.sweeps - problem.schedule.burn_in_sweeps) % options.thin == 0) {
            state.samples.push_back(state.params);
        }
    }
    result.samples = std::move(state.samples);
    result.final_eps = state.eps;
    result.final_distance = state.last_accepted_distance;
    result.proposed = state.proposed;
    result.accepted = state.accepted;
    result.simulation_failures = state.simulation_failures;
    return result;
}

std::vector<ModelParams> ensemble(std::span<const ChainResult> chains, double tolerance,
                                  std::vector<std::size_t>* included)
{
    if (chains.empty()) {
        fail(ErrorKind::InvalidArgument, "ensemble needs at least one chain");
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : chains) {
        if (std::isfinite(c.final_eps) && !c.samples.empty()) {
            best = std::min(best, c.final_eps);
        }
    }
    std::vector<ModelParams> pooled;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < chains.size(); ++i) {
        const auto& c = chains[i];
        if (std::isfinite(c.final_eps) && c.final_eps - best <= tolerance && !c.samples.empty()) {
            pooled.insert(pooled.end(), c.samples.begin(), c.samples.end());
            kept.push_back(i);
        }
    }
    if (pooled.empty()) {
        std::string msg = "no chain passed the convergence filter; final tolerances:";
        for (const auto& c : chains) {
            msg += " " + std::to_string(c.final_eps);
        }
        fail(ErrorKind::Convergence, msg);
    }
    if (included) {
        *included = std::move(kept);
    }
    return pooled;
}

std::vector<ChainResult> fit_chains(const AbcProblem& problem, const FitOptions& options, std::uint64_t seed)
{
    problem.validate();
    if (options.n_chains < 1) {
        fail(ErrorKind::InvalidArgument, "fit needs at least one chain");
    }
    std::vector<ChainResult> chains(options.n_chains);
    unsigned threads = options.threads > 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(options.n_chains));

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(options.n_chains);
    auto worker = [&] {
        for (std::size_t k = next++; k < options.n_chains; k = next++) {
            try {
                chains[k] = run_chain(problem, options.chain, derive_seed(seed, k));
            }
            catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    }
    else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return chains;
}

FitResult fit(const AbcProblem& problem, const FitOptions& options, std::uint64_t seed)
{
    FitResult result;
    result.chains = fit_chains(problem, options, seed);
    result.samples = ensemble(result.chains, options.ensemble_tolerance, &result.included);
    return result;
}

} // namespace hospflow
