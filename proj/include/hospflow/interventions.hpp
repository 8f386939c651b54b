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
#ifndef HOSPFLOW_INTERVENTIONS_HPP
#define HOSPFLOW_INTERVENTIONS_HPP

#include "hospflow/model.hpp"
#include "hospflow/random.hpp"

#include <span>
#include <vector>

namespace hospflow
{

/// Admissions reduction that ramps linearly from 0 at `start_day` to
/// `final_reduction` at `start_day + ramp_days` and stays there.
struct AdmissionsSchedule
{
    int start_day = 1;
    int ramp_days = 30;
    double final_reduction = 0.87;

    double reduction_at(int day) const;
    void validate() const;
};

/// Scales admissions[t] (day t + 1) by 1 - reduction and stochastically
/// rounds, so the expected admissions match the reduced rate.
std::vector<int> apply_admissions_schedule(std::span<const int> admissions, const AdmissionsSchedule& schedule,
                                           Rng& rng);

AdmissionsHook admissions_hook(const AdmissionsSchedule& schedule);

/// Shortens recovering segments by a fixed fraction.
struct RecoveryDurationPolicy
{
    double reduction_fraction = 0.25;
    int min_days = 1;

    void validate() const;
};

/// Duration transform for recovering segments (stochastic_round lives in
/// random.hpp): max(min_days, stochastic_round(days * (1 - reduction))). Declining
/// segments pass through untouched.
DurationHook recovery_duration_hook(const RecoveryDurationPolicy& policy);

} // namespace hospflow

#endif // HOSPFLOW_INTERVENTIONS_HPP
