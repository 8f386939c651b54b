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
#ifndef HOSPFLOW_PRIORS_HPP
#define HOSPFLOW_PRIORS_HPP

#include "hospflow/model.hpp"
#include "hospflow/random.hpp"

#include <array>

namespace hospflow
{

struct BetaParams
{
    double a = 1.0;
    double b = 1.0;

    double mean() const
    {
        return a / (a + b);
    }
};

struct TruncatedNormalParams
{
    double mean = 8.0;
    double sd = 3.0;
    double lower = 0.0;
    double upper = 22.0;
};

struct NormalParams
{
    double mean = 0.5;
    double sd = 0.5;
};

/// Hospital outcome rates used to centre the transition priors, plus the
/// concentrations that set their spread.
struct OutcomeRates
{
    double p_icu = 0.343;
    double p_ventilator = 0.204;
    double p_death = 0.193;
    double early_death_G = 0.01;
    double early_death_I = 0.02;
    double concentration_G = 100.0;
    double death_concentration = 200.0;
};

struct TransitionPriors
{
    std::array<double, 3> recovery_mean{};
    std::array<BetaParams, 3> recovery{};
    std::array<BetaParams, 2> early_death{};
};

/// Solves the outcome-rate balance equations for the mean recovery
/// probabilities and builds Beta priors around them:
///
///   1 - p_icu  = rho_G + (1 - rho_G) d_G
///   p_vent     = p_icu (1 - rho_I) (1 - d_I)
///   p_death    = p_vent (1 - rho_V) + p_icu (1 - rho_I) d_I + d_G
///
/// The concentration shrinks stage by stage with the expected influx
/// (r_I = r_G (1 - rho_G), r_V = r_I (1 - rho_I)). Throws a data error when
/// the rates admit no solution inside (0, 1).
TransitionPriors derive_transition_priors(const OutcomeRates& rates);

/// The mean recovery probabilities alone; zero early-death rates are allowed here.
std::array<double, 3> solve_recovery_means(const OutcomeRates& rates);

struct PriorSpec
{
    std::array<BetaParams, 3> recovery{};
    std::array<BetaParams, 2> early_death{};
    std::array<TruncatedNormalParams, 6> mode{};
    std::array<NormalParams, 6> log10_temperature{};
    int max_duration = 22;
    /// Temperatures pinned to 1 (truncated-Poisson durations).
    bool poisson_mode = false;

    void validate() const;
};

/// Prior with the given transition part and the default duration priors
/// (mode ~ TruncNormal(8, 3^2, [0, D]), log10 temperature ~ N(0.5, 0.5^2)).
PriorSpec make_prior_spec(const TransitionPriors& transitions, int max_duration, bool poisson_mode = false);

ModelParams sample_prior(const PriorSpec& spec, Rng& rng);

/// Log prior density in sampler coordinates (temperatures on the log10 scale).
/// All normalising constants are kept. Returns -inf outside the support.
double prior_log_density(const ModelParams& params, const PriorSpec& spec);

/// Component log densities, exposed for tests and diagnostics.
double beta_log_pdf(double x, const BetaParams& p);
double truncated_normal_log_pdf(double x, const TruncatedNormalParams& p);
double normal_log_pdf(double x, const NormalParams& p);

/// Random-walk proposal settings.
struct ProposalSpec
{
    double recovery_concentration = 100.0;
    double death_concentration = 200.0;
    double mode_variance = 0.25;
    double log10_temperature_variance = 0.01;
    int max_duration = 22;

    void validate() const;
};

/// Smallest distance from 0 and 1 a probability is clamped to before it is
/// used as the mean of a Beta proposal.
inline constexpr double kBetaMeanClamp = 1e-6;

/// Draws a candidate coordinate for a parameter of the given kind.
double propose(ParamKind kind, double current, const ProposalSpec& spec, Rng& rng);

/// Log density of proposing `to` from `from`. Beta and truncated-normal
/// proposals are not symmetric.
double proposal_log_density(ParamKind kind, double from, double to, const ProposalSpec& spec);

} // namespace hospflow

#endif // HOSPFLOW_PRIORS_HPP
