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
#include "hospflow/errors.hpp"
#include "hospflow/model.hpp"
#include "hospflow/priors.hpp"

#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

using namespace hospflow;

TEST_CASE("duration pmf matches the normalised truncated Poisson")
{
    const auto pmf = duration_pmf({1.0, 1.0}, 3);
    REQUIRE(pmf.size() == 3);
    CHECK(pmf[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(pmf[1] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(pmf[2] == doctest::Approx(0.1).epsilon(1e-12));

    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const double mode = 0.2 + 21.8 * uniform01(rng);
        const double temp = std::pow(10.0, -0.5 + 1.5 * uniform01(rng));
        const int max_days = 1 + static_cast<int>(uniform01(rng) * 44);
        const auto p = duration_pmf({mode, temp}, max_days);
        const auto q = oracle::duration_pmf(mode, temp, max_days);
        REQUIRE(p.size() == q.size());
        CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t d = 0; d < p.size(); ++d) {
            CHECK(p[d] == doctest::Approx(q[d]).epsilon(1e-9));
        }
        const auto peak = std::max_element(p.begin(), p.end()) - p.begin();
        for (std::ptrdiff_t d = 1; d <= peak; ++d) {
            CHECK(p[static_cast<std::size_t>(d)] >= p[static_cast<std::size_t>(d - 1)] * (1 - 1e-12));
        }
        for (std::size_t d = static_cast<std::size_t>(peak) + 1; d < p.size(); ++d) {
            CHECK(p[d] <= p[d - 1] * (1 + 1e-12));
        }
    }
}

TEST_CASE("duration pmf temperature limits")
{
    for (const double x : duration_pmf({5.0, 1e6}, 22)) {
        CHECK(std::abs(x - 1.0 / 22.0) < 1e-4);
    }
    // Poisson(8) has equal mass at 7 and 8, so the cold limit splits between them.
    const auto tie = duration_pmf({8.0, 1e-6}, 22);
    CHECK(tie[6] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(tie[7] == doctest::Approx(0.5).epsilon(1e-6));
    const auto cold = duration_pmf({8.5, 1e-6}, 22);
    CHECK(cold[7] >= 1.0 - 1e-6);
}

TEST_CASE("duration pmf rejects invalid parameters")
{
    CHECK_THROWS_AS(duration_pmf({0.0, 1.0}, 22), Error);
    CHECK_THROWS_AS(duration_pmf({8.0, 0.0}, 22), Error);
    CHECK_THROWS_AS(duration_pmf({std::nan(""), 1.0}, 22), Error);
    CHECK_THROWS_AS(duration_pmf({8.0, 1.0}, 0), Error);
    try {
        duration_pmf({-1.0, 1.0}, 22);
    }
    catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Domain);
    }
}

TEST_CASE("sample_duration")
{
    Rng rng(3);
    const std::vector<double> first{1, 0, 0};
    const std::vector<double> last{0, 0, 1};
    for (int i = 0; i < 1000; ++i) {
        CHECK(sample_duration(first, rng) == 1);
        CHECK(sample_duration(last, rng) == 3);
    }
    const std::vector<double> pmf{0.6, 0.3, 0.1};
    const std::size_t n = 1000000;
    std::array<std::size_t, 3> counts{};
    for (std::size_t i = 0; i < n; ++i) {
        counts[static_cast<std::size_t>(sample_duration(pmf, rng) - 1)]++;
    }
    for (std::size_t d = 0; d < 3; ++d) {
        CHECK(test::within_3sigma(static_cast<double>(counts[d]) / n, pmf[d], n));
    }
}

TEST_CASE("next_stage")
{
    CHECK(next_stage(Stage::G, Health::Declining) == Stage::I);
    CHECK(next_stage(Stage::I, Health::Declining) == Stage::V);
    CHECK(next_stage(Stage::V, Health::Declining) == Stage::T);
    CHECK(next_stage(Stage::V, Health::Recovering) == Stage::I);
    CHECK(next_stage(Stage::I, Health::Recovering) == Stage::G);
    CHECK(next_stage(Stage::G, Health::Recovering) == Stage::R);
    CHECK_THROWS_AS(next_stage(Stage::R, Health::Recovering), Error);
    CHECK_THROWS_AS(next_stage(Stage::T, Health::Declining), Error);
}

TEST_CASE("trajectory special cases")
{
    Rng rng(5);
    auto p = test::params();
    p.transitions.recovery[0] = 1.0;
    for (int i = 0; i < 100; ++i) {
        const auto t = sample_trajectory(p, 1, Stage::G, rng);
        REQUIRE(t.segments.size() == 1);
        CHECK(t.segments[0].stage == Stage::G);
        CHECK(t.segments[0].health == Health::Recovering);
        CHECK(t.terminal == Stage::R);
    }

    p.transitions.recovery = {0, 0, 0};
    p.transitions.early_death = {0, 0};
    for (int i = 0; i < 100; ++i) {
        const auto t = sample_trajectory(p, 1, Stage::G, rng);
        REQUIRE(t.segments.size() == 3);
        CHECK(t.segments[0].stage == Stage::G);
        CHECK(t.segments[1].stage == Stage::I);
        CHECK(t.segments[2].stage == Stage::V);
        for (const auto& s : t.segments) {
            CHECK(s.health == Health::Declining);
        }
        CHECK(t.terminal == Stage::T);
    }

    p.transitions.early_death = {1, 0};
    for (int i = 0; i < 100; ++i) {
        const auto t = sample_trajectory(p, 1, Stage::G, rng);
        REQUIRE(t.segments.size() == 1);
        CHECK(t.segments[0].health == Health::Declining);
        CHECK(t.terminal == Stage::T);
    }
    CHECK_THROWS_AS(sample_trajectory(p, 1, Stage::R, rng), Error);
}

TEST_CASE("sampled trajectories follow the allowed transitions")
{
    // (stage, health) -> allowed next stages
    const std::set<std::pair<std::pair<Stage, Health>, Stage>> allowed = {
        {{Stage::G, Health::Declining}, Stage::I}, {{Stage::I, Health::Declining}, Stage::V},
        {{Stage::V, Health::Recovering}, Stage::I}, {{Stage::I, Health::Recovering}, Stage::G},
    };
    const auto prior = test::default_prior();
    Rng rng(17);
    for (int draw = 0; draw < 20; ++draw) {
        const auto p = sample_prior(prior, rng);
        for (int i = 0; i < 5000; ++i) {
            const Stage start = kIntermediateStages[static_cast<std::size_t>(i % 3)];
            const auto t = sample_trajectory(p, 0, start, rng);
            REQUIRE(!t.segments.empty());
            CHECK(t.segments.size() <= 5);
            CHECK(t.segments.front().stage == start);
            CHECK(t.length_of_stay() <= 5 * p.max_duration);
            for (std::size_t k = 0; k < t.segments.size(); ++k) {
                const auto& s = t.segments[k];
                CHECK(s.duration >= 1);
                CHECK(s.duration <= p.max_duration);
                if (k + 1 < t.segments.size()) {
                    const auto& n = t.segments[k + 1];
                    CHECK(allowed.count({{s.stage, s.health}, n.stage}) == 1);
                    CHECK(static_cast<int>(n.health) >= static_cast<int>(s.health));
                }
            }
            const auto& last = t.segments.back();
            if (t.terminal == Stage::R) {
                CHECK(last.stage == Stage::G);
                CHECK(last.health == Health::Recovering);
            }
            else {
                CHECK(last.health == Health::Declining);
            }
        }
    }
}

TEST_CASE("census of a single hand-traced patient")
{
    auto p = test::params(3.5, 1e-3);
    p.transitions.recovery[0] = 1.0;
    CHECK(duration_pmf(p.duration(Stage::G, Health::Recovering), 22)[2] == doctest::Approx(1.0));
    SimulationInputs in;
    in.admissions = {1, 0, 0, 0, 0, 0};
    Rng rng(1);
    const auto c = simulate_census(p, in, rng);
    const std::vector<double> g{1, 1, 1, 0, 0, 0};
    const std::vector<double> r{0, 0, 0, 1, 0, 0};
    CHECK(std::equal(g.begin(), g.end(), c.at("G").begin()));
    CHECK(std::equal(r.begin(), r.end(), c.at("R").begin()));
    for (const char* l : {"I", "V", "T"}) {
        for (const double x : c.at(l)) {
            CHECK(x == 0);
        }
    }
}

TEST_CASE("census with no patients is zero")
{
    SimulationInputs in;
    in.admissions.assign(30, 0);
    Rng rng(2);
    const auto c = simulate_census(test::params(), in, rng);
    CHECK(c.num_days() == 30);
    CHECK(c.labels().size() == 5);
    for (std::size_t k = 0; k < 5; ++k) {
        for (const double x : c.column(k)) {
            CHECK(x == 0);
        }
    }
}

TEST_CASE("census conservation and determinism")
{
    const auto prior = test::default_prior();
    Rng rng(99);
    SimulationInputs in;
    in.admissions.assign(60, 0);
    for (auto& a : in.admissions) {
        a = static_cast<int>(uniform01(rng) * 40);
    }
    in.initial_counts = {100, 20, 10};
    for (int draw = 0; draw < 5; ++draw) {
        const auto p = sample_prior(prior, rng);
        Rng a(draw);
        Rng b(draw);
        const auto full = simulate_census_full(p, in, a);
        CHECK(full.counts.start_day() == -5);
        for (std::size_t t = 0; t < full.counts.num_days(); ++t) {
            double cum = 0;
            for (std::size_t u = 0; u <= t; ++u) {
                cum += full.counts.at("R")[u] + full.counts.at("T")[u];
            }
            const double occ = full.counts.at("G")[t] + full.counts.at("I")[t] + full.counts.at("V")[t];
            CHECK(occ + cum == static_cast<double>(full.started[t]));
        }
        CHECK(simulate_census_full(p, in, b).counts == full.counts);
    }
}

TEST_CASE("warm start admits the inflated standing population over five days")
{
    SimulationInputs in;
    in.admissions.assign(3, 0);
    in.initial_counts = {100, 10, 20};
    Rng rng(4);
    const auto full = simulate_census_full(test::params(), in, rng);
    CHECK(full.counts.start_day() == -5);
    // 103 + 10 + round_half_up(20.6) over days -5..-1
    CHECK(full.started[4] == 103 + 10 + 21);
    CHECK(full.started[0] > 0);
    CHECK(full.started[4] - full.started[3] > 0);
}

TEST_CASE("simulation input errors")
{
    SimulationInputs in;
    in.admissions = {1, -1};
    Rng rng(1);
    CHECK_THROWS_AS(simulate_census(test::params(), in, rng), Error);
    in.admissions = {1, 1};
    in.scale = 0.5;
    CHECK_THROWS_AS(simulate_census(test::params(), in, rng), Error);
}

TEST_CASE("aggregate_counts")
{
    const auto c = test::series(1, {{"G", {5, 1}}, {"I", {2, 3}}, {"V", {1, 1}}, {"R", {0, 0}}, {"T", {0, 1}}});
    const std::vector<LabelMapping> icu{{"InICU", {Stage::I, Stage::V}}, {"AllBeds", {Stage::G, Stage::I, Stage::V}}};
    const auto a = aggregate_counts(c, icu);
    CHECK(a.at("InICU")[0] == 3);
    CHECK(a.at("InICU")[1] == 4);
    CHECK(a.at("AllBeds")[0] == 8);

    std::vector<LabelMapping> identity;
    for (const auto s : kAllStages) {
        identity.push_back({std::string(stage_name(s)), {s}});
    }
    CHECK(aggregate_counts(c, identity) == c);

    const auto partial = test::series(1, {{"G", {1}}});
    const std::vector<LabelMapping> needs_i{{"I", {Stage::I}}};
    try {
        aggregate_counts(partial, needs_i);
        FAIL("expected a config error");
    }
    catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Config);
    }
    CHECK(parse_stage_set("I+V") == std::vector<Stage>{Stage::I, Stage::V});
    CHECK(!parse_stage_set("X"));
    CHECK(!parse_stage_set("G+G"));
}

TEST_CASE("parameter names and coordinates")
{
    auto p = test::params(8.0, 100.0);
    for (const auto id : all_params()) {
        CHECK(parse_param_name(param_name(id)) == id);
    }
    CHECK(param_name(ParamId::RecoveryG) == "recovery_G");
    CHECK(get_coordinate(p, ParamId::TemperatureIRecovering) == doctest::Approx(2.0));
    set_coordinate(p, ParamId::TemperatureIRecovering, -1.0);
    CHECK(p.duration(Stage::I, Health::Recovering).temperature == doctest::Approx(0.1));
    CHECK(get_value(p, ParamId::ModeVDeclining) == 8.0);
    p.duration(Stage::G, Health::Declining).mode = 23.0;
    CHECK_THROWS_AS(p.validate(), Error);
}
