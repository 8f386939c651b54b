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
#include "hospflow/priors.hpp"

#include "hospflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace hospflow
{

namespace
{

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool open_unit(double x)
{
    return std::isfinite(x) && x > 0.0 && x < 1.0;
}

void check_beta(const BetaParams& p, const char* what)
{
    if (!(p.a > 0.0) || !(p.b > 0.0) || !std::isfinite(p.a) || !std::isfinite(p.b)) {
        fail(ErrorKind::Config, std::string("Beta prior for ") + what + " needs positive shapes");
    }
}

double clamp_mean(double x)
{
    return std::clamp(x, kBetaMeanClamp, 1.0 - kBetaMeanClamp);
}

double log_normal_mass(double lower, double upper, double mean, double sd)
{
    const double a = (lower - mean) / sd;
    const double b = (upper - mean) / sd;
    double mass;
    if (a > 0.0) {
        // upper tail: use complementary cdfs
        mass = normal_cdf(-a) - normal_cdf(-b);
    }
    else {
        mass = normal_cdf(b) - normal_cdf(a);
    }
    return std::log(mass);
}

} // namespace

std::array<double, 3> solve_recovery_means(const OutcomeRates& r)
{
    if (!(r.p_ventilator < r.p_icu)) {
        fail(ErrorKind::Data, "ventilation rate must be below the ICU rate");
    }
    const double rho_G = (1.0 - r.p_icu - r.early_death_G) / (1.0 - r.early_death_G);
    const double rho_I = 1.0 - r.p_ventilator / (r.p_icu * (1.0 - r.early_death_I));
    const double rho_V =
        1.0 - (r.p_death - r.p_icu * (1.0 - rho_I) * r.early_death_I - r.early_death_G) / r.p_ventilator;
    if (!open_unit(rho_G) || !open_unit(rho_I) || !open_unit(rho_V)) {
        fail(ErrorKind::Data, "outcome rates are inconsistent: no recovery probabilities inside (0, 1)");
    }
    return {rho_G, rho_I, rho_V};
}

TransitionPriors derive_transition_priors(const OutcomeRates& r)
{
    for (double p : {r.p_icu, r.p_ventilator, r.p_death, r.early_death_G, r.early_death_I}) {
        if (!std::isfinite(p) || p < 0.0 || p >= 1.0) {
            fail(ErrorKind::Data, "outcome rates must lie in [0, 1)");
        }
    }
    if (!(r.concentration_G > 0.0) || !(r.death_concentration > 0.0)) {
        fail(ErrorKind::Data, "prior concentrations must be positive");
    }
    if (!(r.p_ventilator < r.p_icu)) {
        fail(ErrorKind::Data, "ventilation rate must be below the ICU rate");
    }
    TransitionPriors out;
    out.recovery_mean = solve_recovery_means(r);
    const auto [rho_G, rho_I, rho_V] = out.recovery_mean;

    const double conc_G = r.concentration_G;
    const double conc_I = conc_G * (1.0 - rho_G);
    const double conc_V = conc_I * (1.0 - rho_I);
    out.recovery[0] = {conc_G * rho_G, conc_G * (1.0 - rho_G)};
    out.recovery[1] = {conc_I * rho_I, conc_I * (1.0 - rho_I)};
    out.recovery[2] = {conc_V * rho_V, conc_V * (1.0 - rho_V)};

    const double dc = r.death_concentration;
    for (std::size_t k = 0; k < 2; ++k) {
        const double m = k == 0 ? r.early_death_G : r.early_death_I;
        if (!(m > 0.0)) {
            fail(ErrorKind::Data, "early-death prior means must be positive");
        }
        out.early_death[k] = {dc * m, dc * (1.0 - m)};
    }
    return out;
}

void PriorSpec::validate() const
{
    if (max_duration < 1) {
        fail(ErrorKind::Config, "max duration must be at least 1");
    }
    for (const auto& b : recovery) {
        check_beta(b, "recovery");
    }
    for (const auto& b : early_death) {
        check_beta(b, "early death");
    }
    for (const auto& m : mode) {
        if (!(m.sd > 0.0) || !(m.lower < m.upper)) {
            fail(ErrorKind::Config, "mode prior needs sd > 0 and lower < upper");
        }
    }
    for (const auto& t : log10_temperature) {
        if (!(t.sd > 0.0)) {
            fail(ErrorKind::Config, "temperature prior needs sd > 0");
        }
    }
}

PriorSpec make_prior_spec(const TransitionPriors& transitions, int max_duration, bool poisson_mode)
{
    PriorSpec spec;
    spec.recovery = transitions.recovery;
    spec.early_death = transitions.early_death;
    spec.max_duration = max_duration;
    spec.poisson_mode = poisson_mode;
    for (auto& m : spec.mode) {
        m = TruncatedNormalParams{8.0, 3.0, 0.0, static_cast<double>(max_duration)};
    }
    spec.log10_temperature.fill(NormalParams{0.5, 0.5});
    return spec;
}

ModelParams sample_prior(const PriorSpec& spec, Rng& rng)
{
    spec.validate();
    ModelParams p;
    p.max_duration = spec.max_duration;
    for (std::size_t k = 0; k < 3; ++k) {
        p.transitions.recovery[k] = sample_beta(spec.recovery[k].a, spec.recovery[k].b, rng);
    }
    for (std::size_t k = 0; k < 2; ++k) {
        p.transitions.early_death[k] = sample_beta(spec.early_death[k].a, spec.early_death[k].b, rng);
    }
    for (std::size_t k = 0; k < 6; ++k) {
        const auto& m = spec.mode[k];
        double mode = sample_truncated_normal(m.mean, m.sd, m.lower, m.upper, rng);
        // the duration family needs a strictly positive mode
        while (mode <= 0.0) {
            mode = sample_truncated_normal(m.mean, m.sd, m.lower, m.upper, rng);
        }
        p.durations[k].mode = mode;
        const auto& t = spec.log10_temperature[k];
        p.durations[k].temperature = spec.poisson_mode ? 1.0 : std::pow(10.0, sample_normal(t.mean, t.sd, rng));
    }
    return p;
}

double beta_log_pdf(double x, const BetaParams& p)
{
    if (!open_unit(x)) {
        return kNegInf;
    }
    const double log_beta_fn = std::lgamma(p.a) + std::lgamma(p.b) - std::lgamma(p.a + p.b);
    return (p.a - 1.0) * std::log(x) + (p.b - 1.0) * std::log1p(-x) - log_beta_fn;
}

double normal_log_pdf(double x, const NormalParams& p)
{
    if (!std::isfinite(x)) {
        return kNegInf;
    }
    const double z = (x - p.mean) / p.sd;
    return -0.5 * z * z - std::log(p.sd) - 0.5 * std::log(2.0 * std::numbers::pi);
}

double truncated_normal_log_pdf(double x, const TruncatedNormalParams& p)
{
    if (!std::isfinite(x) || x < p.lower || x > p.upper) {
        return kNegInf;
    }
    return normal_log_pdf(x, {p.mean, p.sd}) - log_normal_mass(p.lower, p.upper, p.mean, p.sd);
}

double prior_log_density(const ModelParams& params, const PriorSpec& spec)
{
    double total = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        total += beta_log_pdf(params.transitions.recovery[k], spec.recovery[k]);
    }
    for (std::size_t k = 0; k < 2; ++k) {
        total += beta_log_pdf(params.transitions.early_death[k], spec.early_death[k]);
    }
    for (std::size_t k = 0; k < 6; ++k) {
        const auto& dp = params.durations[k];
        if (!(dp.mode > 0.0)) {
            return kNegInf;
        }
        total += truncated_normal_log_pdf(dp.mode, spec.mode[k]);
        if (!(dp.temperature > 0.0)) {
            return kNegInf;
        }
        if (!spec.poisson_mode) {
            total += normal_log_pdf(std::log10(dp.temperature), spec.log10_temperature[k]);
        }
    }
    return std::isnan(total) ? kNegInf : total;
}

void ProposalSpec::validate() const
{
    if (!(recovery_concentration > 0.0) || !(death_concentration > 0.0) || !(mode_variance > 0.0) ||
        !(log10_temperature_variance > 0.0)) {
        fail(ErrorKind::Config, "proposal scales must be positive");
    }
    if (max_duration < 1) {
        fail(ErrorKind::Config, "max duration must be at least 1");
    }
}

double propose(ParamKind kind, double current, const ProposalSpec& spec, Rng& rng)
{
    switch (kind) {
    case ParamKind::Recovery:
    case ParamKind::EarlyDeath: {
        const double r = kind == ParamKind::Recovery ? spec.recovery_concentration : spec.death_concentration;
        const double m = clamp_mean(current);
        return sample_beta(r * m, r * (1.0 - m), rng);
    }
    case ParamKind::Mode:
        return sample_truncated_normal(current, std::sqrt(spec.mode_variance), 1.0,
                                       static_cast<double>(spec.max_duration), rng);
    case ParamKind::LogTemperature:
        return sample_normal(current, std::sqrt(spec.log10_temperature_variance), rng);
    }
    return current;
}

double proposal_log_density(ParamKind kind, double from, double to, const ProposalSpec& spec)
{
    switch (kind) {
    case ParamKind::Recovery:
    case ParamKind::EarlyDeath: {
        const double r = kind == ParamKind::Recovery ? spec.recovery_concentration : spec.death_concentration;
        const double m = clamp_mean(from);
        return beta_log_pdf(to, {r * m, r * (1.0 - m)});
    }
    case ParamKind::Mode:
        return truncated_normal_log_pdf(
            to, {from, std::sqrt(spec.mode_variance), 1.0, static_cast<double>(spec.max_duration)});
    case ParamKind::LogTemperature:
        return normal_log_pdf(to, {from, std::sqrt(spec.log10_temperature_variance)});
    }
    return kNegInf;
}

} // namespace hospflow
