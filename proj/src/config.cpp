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
#include "hospflow/config.hpp"

#include "hospflow/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace hospflow
{

namespace
{

using boost::property_tree::ptree;

struct Key
{
    std::string section;
    std::string name;
    std::string value;

    [[noreturn]] void reject(const std::string& why) const
    {
        fail(ErrorKind::Config, "config key [" + section + "] " + name + ": " + why);
    }

    double number() const
    {
        double v = 0.0;
        const char* first = value.data();
        const char* last = value.data() + value.size();
        if (first != last && *first == '+') {
            ++first;
        }
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
            reject("expected a number, got '" + value + "'");
        }
        return v;
    }

    double number_in(double lo, double hi) const
    {
        const double v = number();
        if (v < lo || v > hi) {
            std::ostringstream msg;
            msg << "value " << v << " outside [" << lo << ", " << hi << "]";
            reject(msg.str());
        }
        return v;
    }

    double positive() const
    {
        const double v = number();
        if (!(v > 0.0)) {
            reject("must be positive");
        }
        return v;
    }

    long long integer_in(long long lo, long long hi) const
    {
        const double v = number_in(static_cast<double>(lo), static_cast<double>(hi));
        if (v != std::floor(v)) {
            reject("expected an integer");
        }
        return static_cast<long long>(v);
    }

    bool boolean() const
    {
        std::string v = value;
        std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
        if (v == "true" || v == "yes" || v == "1" || v == "on") {
            return true;
        }
        if (v == "false" || v == "no" || v == "0" || v == "off") {
            return false;
        }
        reject("expected a boolean, got '" + value + "'");
    }

    std::vector<std::string> list() const
    {
        std::vector<std::string> out;
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto b = item.find_first_not_of(" \t");
            const auto e = item.find_last_not_of(" \t");
            if (b != std::string::npos) {
                out.push_back(item.substr(b, e - b + 1));
            }
        }
        return out;
    }

    std::vector<double> number_list(double lo, double hi) const
    {
        std::vector<double> out;
        for (const auto& item : list()) {
            Key k{section, name, item};
            out.push_back(k.number_in(lo, hi));
        }
        if (out.empty()) {
            reject("expected a non-empty list");
        }
        return out;
    }
};

using Handler = std::function<void(RunConfig&, const Key&)>;

const std::map<std::string, std::map<std::string, Handler>>& handlers()
{
    static const std::map<std::string, std::map<std::string, Handler>> table = {
        {"model",
         {
             {"max_duration", [](RunConfig& c, const Key& k) { c.max_duration = static_cast<int>(k.integer_in(1, 365)); }},
             {"poisson_mode", [](RunConfig& c, const Key& k) { c.poisson_mode = k.boolean(); }},
             {"scale", [](RunConfig& c, const Key& k) { c.scale = k.number_in(1.0, 1e6); }},
             {"warm_start_inflation",
              [](RunConfig& c, const Key& k) { c.warm_start_inflation = k.number_in(1.0, 2.0); }},
             {"warm_start_days",
              [](RunConfig& c, const Key& k) { c.warm_start_days = static_cast<int>(k.integer_in(1, 60)); }},
             {"initial_G",
              [](RunConfig& c, const Key& k) {
                  c.initial_counts = c.initial_counts.value_or(std::array<int, 3>{});
                  (*c.initial_counts)[0] = static_cast<int>(k.integer_in(0, 100000000));
              }},
             {"initial_I",
              [](RunConfig& c, const Key& k) {
                  c.initial_counts = c.initial_counts.value_or(std::array<int, 3>{});
                  (*c.initial_counts)[1] = static_cast<int>(k.integer_in(0, 100000000));
              }},
             {"initial_V",
              [](RunConfig& c, const Key& k) {
                  c.initial_counts = c.initial_counts.value_or(std::array<int, 3>{});
                  (*c.initial_counts)[2] = static_cast<int>(k.integer_in(0, 100000000));
              }},
         }},
        {"prior",
         {
             {"p_icu", [](RunConfig& c, const Key& k) { c.rates.p_icu = k.number_in(0.0, 1.0); }},
             {"p_ventilator", [](RunConfig& c, const Key& k) { c.rates.p_ventilator = k.number_in(0.0, 1.0); }},
             {"p_death", [](RunConfig& c, const Key& k) { c.rates.p_death = k.number_in(0.0, 1.0); }},
             {"early_death_G", [](RunConfig& c, const Key& k) { c.rates.early_death_G = k.number_in(0.0, 1.0); }},
             {"early_death_I", [](RunConfig& c, const Key& k) { c.rates.early_death_I = k.number_in(0.0, 1.0); }},
             {"concentration_G", [](RunConfig& c, const Key& k) { c.rates.concentration_G = k.positive(); }},
             {"death_concentration",
              [](RunConfig& c, const Key& k) { c.rates.death_concentration = k.positive(); }},
             {"mode_mean", [](RunConfig& c, const Key& k) { c.mode_mean = k.number_in(0.0, 365.0); }},
             {"mode_sd", [](RunConfig& c, const Key& k) { c.mode_sd = k.positive(); }},
             {"log10_temperature_mean",
              [](RunConfig& c, const Key& k) { c.log10_temperature_mean = k.number_in(-10.0, 10.0); }},
             {"log10_temperature_sd", [](RunConfig& c, const Key& k) { c.log10_temperature_sd = k.positive(); }},
         }},
        {"proposal",
         {
             {"recovery_concentration",
              [](RunConfig& c, const Key& k) { c.proposal.recovery_concentration = k.positive(); }},
             {"death_concentration",
              [](RunConfig& c, const Key& k) { c.proposal.death_concentration = k.positive(); }},
             {"mode_variance", [](RunConfig& c, const Key& k) { c.proposal.mode_variance = k.positive(); }},
             {"log10_temperature_variance",
              [](RunConfig& c, const Key& k) { c.proposal.log10_temperature_variance = k.positive(); }},
         }},
        {"abc",
         {
             {"eps_init", [](RunConfig& c, const Key& k) { c.schedule.eps_init = k.number_in(1e-9, 1.0); }},
             {"decay",
              [](RunConfig& c, const Key& k) {
                  if (k.value == "auto") {
                      c.schedule.decay.reset();
                      return;
                  }
                  const double v = k.number();
                  if (!(v > 0.0 && v <= 1.0)) {
                      k.reject("decay must lie in (0, 1]");
                  }
                  c.schedule.decay = v;
              }},
             {"bump", [](RunConfig& c, const Key& k) { c.schedule.bump = k.number_in(0.0, 1.0); }},
             {"bump_interval_sweeps",
              [](RunConfig& c, const Key& k) {
                  c.schedule.bump_interval_sweeps = static_cast<std::uint64_t>(k.integer_in(0, 1000000000));
              }},
             {"burn_in_sweeps",
              [](RunConfig& c, const Key& k) {
                  c.schedule.burn_in_sweeps = static_cast<std::uint64_t>(k.integer_in(0, 1000000000));
              }},
             {"sampling_raise", [](RunConfig& c, const Key& k) { c.schedule.sampling_raise = k.number_in(0.0, 1.0); }},
             {"chains", [](RunConfig& c, const Key& k) { c.chains = static_cast<std::size_t>(k.integer_in(1, 10000)); }},
             {"samples_per_chain",
              [](RunConfig& c, const Key& k) {
                  c.samples_per_chain = static_cast<std::size_t>(k.integer_in(1, 100000000));
              }},
             {"thin", [](RunConfig& c, const Key& k) { c.thin = static_cast<std::size_t>(k.integer_in(1, 1000000)); }},
             {"ensemble_tolerance",
              [](RunConfig& c, const Key& k) { c.ensemble_tolerance = k.number_in(0.0, 1.0); }},
         }},
        {"data",
         {
             {"date_column", [](RunConfig& c, const Key& k) { c.csv.date_column = k.value; }},
             {"admissions_column", [](RunConfig& c, const Key& k) { c.csv.admissions_column = k.value; }},
             {"admissions_shift",
              [](RunConfig& c, const Key& k) { c.csv.admissions_shift = static_cast<int>(k.integer_in(0, 30)); }},
             {"train_end",
              [](RunConfig& c, const Key& k) {
                  if (!parse_iso_date(k.value)) {
                      k.reject("expected an ISO date YYYY-MM-DD");
                  }
                  c.train_end = k.value;
              }},
             {"train_days",
              [](RunConfig& c, const Key& k) { c.train_days = static_cast<std::size_t>(k.integer_in(1, 100000)); }},
             {"smooth", [](RunConfig& c, const Key& k) { c.smooth_labels = k.list(); }},
             {"smooth_window",
              [](RunConfig& c, const Key& k) {
                  const auto w = k.integer_in(1, 99);
                  if (w % 2 == 0) {
                      k.reject("window must be odd");
                  }
                  c.smooth_window = static_cast<int>(w);
              }},
         }},
        {"evaluate",
         {
             {"batch_size",
              [](RunConfig& c, const Key& k) { c.batches.batch_size = static_cast<std::size_t>(k.integer_in(1, 1000000)); }},
             {"n_batches",
              [](RunConfig& c, const Key& k) { c.batches.n_batches = static_cast<std::size_t>(k.integer_in(1, 1000000)); }},
             {"coverage", [](RunConfig& c, const Key& k) { c.coverage_targets = k.number_list(0.0, 100.0); }},
             {"percentiles", [](RunConfig& c, const Key& k) { c.percentile_levels = k.number_list(0.0, 100.0); }},
             {"lr_samples",
              [](RunConfig& c, const Key& k) { c.lr_samples = static_cast<std::size_t>(k.integer_in(1, 10000000)); }},
         }},
        {"admissions_scenario",
         {
             {"start",
              [](RunConfig& c, const Key& k) {
                  auto s = c.admissions_scenario.value_or(AdmissionsSchedule{});
                  if (parse_iso_date(k.value)) {
                      c.admissions_scenario_start_date = k.value;
                  }
                  else {
                      s.start_day = static_cast<int>(k.integer_in(-100000, 100000));
                  }
                  c.admissions_scenario = s;
              }},
             {"ramp_days",
              [](RunConfig& c, const Key& k) {
                  auto s = c.admissions_scenario.value_or(AdmissionsSchedule{});
                  s.ramp_days = static_cast<int>(k.integer_in(0, 100000));
                  c.admissions_scenario = s;
              }},
             {"final_reduction",
              [](RunConfig& c, const Key& k) {
                  auto s = c.admissions_scenario.value_or(AdmissionsSchedule{});
                  s.final_reduction = k.number_in(0.0, 1.0);
                  c.admissions_scenario = s;
              }},
         }},
        {"recovery_scenario",
         {
             {"reduction_fraction",
              [](RunConfig& c, const Key& k) {
                  auto p = c.recovery_scenario.value_or(RecoveryDurationPolicy{});
                  const double v = k.number();
                  if (!(v >= 0.0 && v < 1.0)) {
                      k.reject("reduction_fraction must lie in [0, 1)");
                  }
                  p.reduction_fraction = v;
                  c.recovery_scenario = p;
              }},
             {"min_days",
              [](RunConfig& c, const Key& k) {
                  auto p = c.recovery_scenario.value_or(RecoveryDurationPolicy{});
                  p.min_days = static_cast<int>(k.integer_in(1, 365));
                  c.recovery_scenario = p;
              }},
         }},
    };
    return table;
}

void apply_weights_key(RunConfig& c, const Key& k)
{
    if (k.name == "time_start") {
        c.time_weight_start = k.positive();
    }
    else if (k.name == "time_end") {
        c.time_weight_end = k.positive();
    }
    else {
        c.stage_weights.emplace_back(k.name, k.positive());
    }
}

RunConfig from_tree(const ptree& tree)
{
    RunConfig config;
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            fail(ErrorKind::Config, "config key '" + section + "' must be inside a [section]");
        }
        for (const auto& [name, node] : body) {
            const Key key{section, name, node.get_value<std::string>()};
            if (section == "weights") {
                apply_weights_key(config, key);
            }
            else if (section == "columns") {
                config.csv.columns.push_back(parse_column_expression(name, key.value));
            }
            else if (section == "labels") {
                const auto stages = parse_stage_set(key.value);
                if (!stages) {
                    key.reject("expected a stage set such as G+I+V");
                }
                config.csv.custom_labels.push_back({name, *stages});
            }
            else {
                const auto sec = handlers().find(section);
                if (sec == handlers().end()) {
                    fail(ErrorKind::Config, "unknown config section [" + section + "]");
                }
                const auto h = sec->second.find(name);
                if (h == sec->second.end()) {
                    key.reject("unknown key");
                }
                h->second(config, key);
            }
        }
    }
    config.validate();
    return config;
}

} // namespace

void RunConfig::validate() const
{
    schedule.validate();
    proposal.validate();
    if (train_end && train_days) {
        fail(ErrorKind::Config, "set only one of [data] train_end and train_days");
    }
    if (mode_mean > max_duration) {
        fail(ErrorKind::Config, "config key [prior] mode_mean: exceeds max_duration");
    }
    if (!(rates.p_ventilator < rates.p_icu)) {
        fail(ErrorKind::Config, "config key [prior] p_ventilator: must be below p_icu");
    }
    if (admissions_scenario) {
        admissions_scenario->validate();
    }
    if (recovery_scenario) {
        recovery_scenario->validate();
    }
}

RunConfig parse_config_text(const std::string& text)
{
    std::istringstream in(text);
    ptree tree;
    try {
        boost::property_tree::read_ini(in, tree);
    }
    catch (const boost::property_tree::ini_parser_error& e) {
        fail(ErrorKind::Config, std::string("config syntax error: ") + e.what());
    }
    return from_tree(tree);
}

RunConfig parse_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::Io, "cannot open config '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

void apply_fast_mode(RunConfig& config)
{
    config.schedule.burn_in_sweeps = std::min<std::uint64_t>(config.schedule.burn_in_sweeps, 200);
    config.schedule.bump_interval_sweeps = 0;
    config.chains = std::min<std::size_t>(config.chains, 2);
    config.samples_per_chain = std::min<std::size_t>(config.samples_per_chain, 20);
    config.batches.batch_size = std::min<std::size_t>(config.batches.batch_size, 10);
    config.batches.n_batches = std::min<std::size_t>(config.batches.n_batches, 10);
    config.lr_samples = std::min<std::size_t>(config.lr_samples, 200);
}

} // namespace hospflow
