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
#include "hospflow/interventions.hpp"

#include "hospflow/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hospflow
{

double AdmissionsSchedule::reduction_at(int day) const
{
    if (day < start_day) {
        return 0.0;
    }
    if (ramp_days <= 0) {
        return final_reduction;
    }
    const double frac = std::min(1.0, static_cast<double>(day - start_day) / static_cast<double>(ramp_days));
    return frac * final_reduction;
}

void AdmissionsSchedule::validate() const
{
    if (ramp_days < 0) {
        fail(ErrorKind::Config, "ramp_days must be non-negative");
    }
    if (!(final_reduction >= 0.0 && final_reduction <= 1.0)) {
        fail(ErrorKind::Config, "final_reduction must lie in [0, 1]");
    }
}

std::vector<int> apply_admissions_schedule(std::span<const int> admissions, const AdmissionsSchedule& schedule,
                                           Rng& rng)
{
    schedule.validate();
    std::vector<int> out(admissions.size());
    for (std::size_t i = 0; i < admissions.size(); ++i) {
        const double keep = 1.0 - schedule.reduction_at(static_cast<int>(i) + 1);
        out[i] = keep == 1.0 ? admissions[i] : stochastic_round(admissions[i] * keep, rng);
    }
    return out;
}

AdmissionsHook admissions_hook(const AdmissionsSchedule& schedule)
{
    schedule.validate();
    return [schedule](std::span<const int> admissions, Rng& rng) {
        return apply_admissions_schedule(admissions, schedule, rng);
    };
}

void RecoveryDurationPolicy::validate() const
{
    if (!(reduction_fraction >= 0.0 && reduction_fraction < 1.0)) {
        fail(ErrorKind::Config, "reduction_fraction must lie in [0, 1)");
    }
    if (min_days < 1) {
        fail(ErrorKind::Config, "min_days must be at least 1");
    }
}

DurationHook recovery_duration_hook(const RecoveryDurationPolicy& policy)
{
    policy.validate();
    return [policy](Stage, Health health, int days, Rng& rng) {
        if (health != Health::Recovering) {
            return days;
        }
        const int shortened = stochastic_round(days * (1.0 - policy.reduction_fraction), rng);
        return std::max(policy.min_days, shortened);
    };
}

} // namespace hospflow
