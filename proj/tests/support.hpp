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
#ifndef HOSPFLOW_TESTS_SUPPORT_HPP
#define HOSPFLOW_TESTS_SUPPORT_HPP

#include "hospflow/model.hpp"
#include "hospflow/priors.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace test
{

inline hospflow::ModelParams params(double mode = 8.0, double temperature = 1.0)
{
    hospflow::ModelParams p;
    p.transitions.recovery = {0.65, 0.39, 0.12};
    p.transitions.early_death = {0.01, 0.02};
    for (auto& d : p.durations) {
        d = {mode, temperature};
    }
    return p;
}

inline hospflow::PriorSpec default_prior(int max_duration = 22, bool poisson = false)
{
    return hospflow::make_prior_spec(hospflow::derive_transition_priors({}), max_duration, poisson);
}

inline hospflow::CensusSeries series(int start_day, std::vector<std::pair<std::string, std::vector<double>>> cols)
{
    hospflow::CensusSeries s(start_day, cols.empty() ? 0 : cols.front().second.size(), {});
    for (auto& [label, values] : cols) {
        s.add(label, std::move(values));
    }
    return s;
}

/// Binomial 3-sigma band for a frequency estimated from n draws.
inline bool within_3sigma(double observed, double p, std::size_t n)
{
    return std::abs(observed - p) <= 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n)) + 1e-12;
}

} // namespace test

#endif // HOSPFLOW_TESTS_SUPPORT_HPP
