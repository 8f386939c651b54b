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
#include "hospflow/hospflow.h"

#include "hospflow/config.hpp"
#include "hospflow/errors.hpp"
#include "hospflow/output.hpp"
#include "hospflow/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <memory>
#include <new>
#include <string>

struct hf_config
{
    hospflow::RunConfig config;
};

struct hf_dataset
{
    hospflow::Dataset dataset;
};

struct hf_samples
{
    std::vector<hospflow::ModelParams> samples;
};

struct hf_fit
{
    hospflow::FitResult result;
};

namespace
{

thread_local std::string last_error;

hf_status to_status(hospflow::ErrorKind kind)
{
    using hospflow::ErrorKind;
    switch (kind) {
    case ErrorKind::InvalidArgument:
        return HF_ERR_INVALID_ARGUMENT;
    case ErrorKind::Domain:
        return HF_ERR_DOMAIN;
    case ErrorKind::Config:
        return HF_ERR_CONFIG;
    case ErrorKind::Data:
        return HF_ERR_DATA;
    case ErrorKind::Convergence:
        return HF_ERR_CONVERGENCE;
    case ErrorKind::Io:
        return HF_ERR_IO;
    }
    return HF_ERR_INTERNAL;
}

template <class F>
hf_status guarded(F&& body)
{
    try {
        body();
        last_error.clear();
        return HF_OK;
    }
    catch (const hospflow::Error& e) {
        last_error = e.what();
        return to_status(e.kind());
    }
    catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return HF_ERR_INTERNAL;
    }
    catch (const std::exception& e) {
        last_error = e.what();
        return HF_ERR_INTERNAL;
    }
    catch (...) {
        last_error = "unknown error";
        return HF_ERR_INTERNAL;
    }
}

void require(const void* p, const char* what)
{
    if (p == nullptr) {
        hospflow::fail(hospflow::ErrorKind::InvalidArgument, std::string(what) + " is null");
    }
}

std::string in_dir(const char* dir, const char* file)
{
    require(dir, "dir");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        hospflow::fail(hospflow::ErrorKind::Io, std::string("cannot create '") + dir + "': " + ec.message());
    }
    return (std::filesystem::path(dir) / file).string();
}

hospflow::ModelParams& sample_at(std::vector<hospflow::ModelParams>& s, size_t i)
{
    if (i >= s.size()) {
        hospflow::fail(hospflow::ErrorKind::InvalidArgument, "sample index out of range");
    }
    return s[i];
}

hospflow::ParamId param_id(const char* name)
{
    require(name, "param");
    const auto id = hospflow::parse_param_name(name);
    if (!id) {
        hospflow::fail(hospflow::ErrorKind::InvalidArgument, std::string("unknown parameter '") + name + "'");
    }
    return *id;
}

} // namespace

extern "C" {

const char* hf_last_error(void)
{
    return last_error.c_str();
}

const char* hf_status_name(hf_status status)
{
    switch (status) {
    case HF_OK:
        return "ok";
    case HF_ERR_INVALID_ARGUMENT:
        return "invalid argument";
    case HF_ERR_CONFIG:
        return "config error";
    case HF_ERR_DATA:
        return "data error";
    case HF_ERR_CONVERGENCE:
        return "convergence error";
    case HF_ERR_IO:
        return "i/o error";
    case HF_ERR_DOMAIN:
        return "domain error";
    case HF_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

const char* hf_version(void)
{
    return "0.1.0";
}

hf_status hf_config_default(hf_config** out)
{
    return guarded([&] {
        require(out, "out");
        *out = new hf_config{};
    });
}

hf_status hf_config_load(const char* path, hf_config** out)
{
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new hf_config{hospflow::parse_config(path)};
    });
}

hf_status hf_config_parse(const char* text, hf_config** out)
{
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        *out = new hf_config{hospflow::parse_config_text(text)};
    });
}

hf_status hf_config_set_fast(hf_config* config)
{
    return guarded([&] {
        require(config, "config");
        hospflow::apply_fast_mode(config->config);
    });
}

hf_status hf_config_max_duration(const hf_config* config, int* out)
{
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        *out = config->config.max_duration;
    });
}

void hf_config_free(hf_config* config)
{
    delete config;
}

hf_status hf_dataset_load(const hf_config* config, const char* path, hf_dataset** out)
{
    return guarded([&] {
        require(config, "config");
        require(path, "path");
        require(out, "out");
        *out = new hf_dataset{hospflow::load_dataset(config->config, path)};
    });
}

hf_status hf_dataset_simulate(const hf_config* config, const hf_samples* truth, const int* admissions,
                              size_t n_days, int multiplier, uint64_t seed, hf_dataset** out)
{
    return guarded([&] {
        require(config, "config");
        require(truth, "truth");
        require(out, "out");
        if (truth->samples.empty()) {
            hospflow::fail(hospflow::ErrorKind::InvalidArgument, "truth has no parameter rows");
        }
        if (multiplier < 0) {
            hospflow::fail(hospflow::ErrorKind::InvalidArgument, "multiplier must be non-negative");
        }
        std::vector<int> adm;
        if (admissions) {
            for (size_t i = 0; i < n_days; ++i) {
                adm.push_back(admissions[i] * multiplier);
            }
        }
        else {
            adm = hospflow::synthetic_admissions(n_days, multiplier);
        }
        const auto& c = config->config;
        const auto initial = c.initial_counts.value_or(std::array<int, 3>{});
        *out = new hf_dataset{hospflow::simulate_dataset(c, truth->samples.front(), adm, initial, seed)};
    });
}

hf_status hf_dataset_write(const hf_dataset* dataset, const char* path)
{
    return guarded([&] {
        require(dataset, "dataset");
        require(path, "path");
        hospflow::write_dataset_csv(path, dataset->dataset);
    });
}

hf_status hf_dataset_num_days(const hf_dataset* dataset, size_t* out)
{
    return guarded([&] {
        require(dataset, "dataset");
        require(out, "out");
        *out = dataset->dataset.num_days();
    });
}

hf_status hf_dataset_train_days(const hf_dataset* dataset, size_t* out)
{
    return guarded([&] {
        require(dataset, "dataset");
        require(out, "out");
        *out = dataset->dataset.train_days;
    });
}

void hf_dataset_free(hf_dataset* dataset)
{
    delete dataset;
}

hf_status hf_samples_load(const hf_config* config, const char* path, hf_samples** out)
{
    return guarded([&] {
        require(config, "config");
        require(path, "path");
        require(out, "out");
        *out = new hf_samples{hospflow::read_samples_csv(path, config->config.max_duration)};
    });
}

hf_status hf_samples_prior_mean(const hf_config* config, hf_samples** out)
{
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        const auto prior = hospflow::build_prior(config->config);
        hospflow::ModelParams p;
        p.max_duration = prior.max_duration;
        for (std::size_t i = 0; i < 3; ++i) {
            p.transitions.recovery[i] = prior.recovery[i].mean();
        }
        for (std::size_t i = 0; i < 2; ++i) {
            p.transitions.early_death[i] = prior.early_death[i].mean();
        }
        for (std::size_t i = 0; i < 6; ++i) {
            p.durations[i].mode = std::clamp(prior.mode[i].mean, 1.0, static_cast<double>(prior.max_duration));
            p.durations[i].temperature =
                prior.poisson_mode ? 1.0 : std::pow(10.0, prior.log10_temperature[i].mean);
        }
        p.validate();
        *out = new hf_samples{{p}};
    });
}

hf_status hf_samples_write(const hf_samples* samples, const char* path)
{
    return guarded([&] {
        require(samples, "samples");
        require(path, "path");
        hospflow::write_samples_csv(path, samples->samples);
    });
}

hf_status hf_samples_count(const hf_samples* samples, size_t* out)
{
    return guarded([&] {
        require(samples, "samples");
        require(out, "out");
        *out = samples->samples.size();
    });
}

hf_status hf_samples_get(const hf_samples* samples, size_t index, const char* param, double* out)
{
    return guarded([&] {
        require(samples, "samples");
        require(out, "out");
        auto& s = const_cast<std::vector<hospflow::ModelParams>&>(samples->samples);
        *out = hospflow::get_value(sample_at(s, index), param_id(param));
    });
}

hf_status hf_samples_set(hf_samples* samples, size_t index, const char* param, double value)
{
    return guarded([&] {
        require(samples, "samples");
        auto p = sample_at(samples->samples, index);
        hospflow::set_value(p, param_id(param), value);
        p.validate();
        samples->samples[index] = p;
    });
}

void hf_samples_free(hf_samples* samples)
{
    delete samples;
}

hf_status hf_fit_run(const hf_config* config, const hf_dataset* dataset, uint64_t seed, unsigned threads,
                     hf_fit** out)
{
    return guarded([&] {
        require(config, "config");
        require(dataset, "dataset");
        require(out, "out");
        *out = nullptr;
        const auto problem = hospflow::build_problem(config->config, dataset->dataset);
        auto options = hospflow::build_fit_options(config->config, threads);
        auto handle = std::make_unique<hf_fit>();
        handle->result.chains = hospflow::fit_chains(problem, options, seed);
        hf_fit* raw = handle.release();
        *out = raw;
        raw->result.samples =
            hospflow::ensemble(raw->result.chains, options.ensemble_tolerance, &raw->result.included);
    });
}

hf_status hf_fit_samples(const hf_fit* fit, hf_samples** out)
{
    return guarded([&] {
        require(fit, "fit");
        require(out, "out");
        if (fit->result.samples.empty()) {
            hospflow::fail(hospflow::ErrorKind::Convergence, "fit produced no ensembled samples");
        }
        *out = new hf_samples{fit->result.samples};
    });
}

hf_status hf_fit_write_diagnostics(const hf_fit* fit, const char* dir)
{
    return guarded([&] {
        require(fit, "fit");
        hospflow::write_trace_csv(in_dir(dir, "trace.csv"), fit->result.chains);
        hospflow::write_acceptance_csv(in_dir(dir, "acceptance.csv"), fit->result.chains);
        hospflow::write_chains_csv(in_dir(dir, "chains.csv"), fit->result);
    });
}

void hf_fit_free(hf_fit* fit)
{
    delete fit;
}

hf_status hf_forecast_write(const hf_config* config, const hf_dataset* dataset, const hf_samples* samples,
                            uint64_t seed, const char* dir)
{
    return guarded([&] {
        require(config, "config");
        require(dataset, "dataset");
        require(samples, "samples");
        const auto& ds = dataset->dataset;
        const auto run = hospflow::run_forecast(config->config, ds, samples->samples, seed);
        hospflow::write_forecast_summary_csv(in_dir(dir, "forecast.csv"), run.summary, ds.dates);
        hospflow::write_forecast_summary_json(in_dir(dir, "forecast.json"), run.summary, ds.dates);
    });
}

hf_status hf_evaluate_write(const hf_config* config, const hf_dataset* dataset, const hf_samples* samples,
                            uint64_t seed, const char* dir)
{
    return guarded([&] {
        require(config, "config");
        require(dataset, "dataset");
        require(samples, "samples");
        const auto& ds = dataset->dataset;
        const auto eval = hospflow::run_evaluation(config->config, ds, samples->samples, seed);
        hospflow::write_mae_csv(in_dir(dir, "mae.csv"), eval.mae);
        hospflow::write_mae_json(in_dir(dir, "mae.json"), eval.mae);
        hospflow::write_coverage_csv(in_dir(dir, "coverage.csv"), eval.coverage);
        const auto run = hospflow::run_forecast(config->config, ds, samples->samples, seed);
        hospflow::write_forecast_summary_csv(in_dir(dir, "forecast.csv"), run.summary, ds.dates);
    });
}

hf_status hf_whatif_write(const hf_config* config, const hf_dataset* dataset, const hf_samples* samples,
                          uint64_t seed, const char* dir)
{
    return guarded([&] {
        require(config, "config");
        require(dataset, "dataset");
        require(samples, "samples");
        const auto& ds = dataset->dataset;
        const auto w = hospflow::run_whatif(config->config, ds, samples->samples, seed);
        hospflow::write_forecast_summary_csv(in_dir(dir, "baseline.csv"), w.baseline, ds.dates);
        hospflow::write_forecast_summary_csv(in_dir(dir, "scenario.csv"), w.scenario, ds.dates);
        hospflow::write_forecast_summary_csv(in_dir(dir, "difference.csv"), w.difference, ds.dates);
    });
}

hf_status hf_duration_pmf(double mode, double temperature, int max_duration, double* out, size_t len)
{
    return guarded([&] {
        require(out, "out");
        if (max_duration < 1 || len < static_cast<size_t>(max_duration)) {
            hospflow::fail(hospflow::ErrorKind::InvalidArgument, "output buffer shorter than max_duration");
        }
        const auto pmf = hospflow::duration_pmf({mode, temperature}, max_duration);
        std::copy(pmf.begin(), pmf.end(), out);
    });
}

} // extern "C"
