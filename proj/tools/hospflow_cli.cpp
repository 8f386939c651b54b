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

#include "CLI11.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace
{

enum ExitCode
{
    kExitOk = 0,
    kExitInternal = 1,
    kExitUsage = 2,
    kExitConfig = 3,
    kExitData = 4,
    kExitConvergence = 5,
    kExitIo = 6,
};

int exit_code(hf_status s)
{
    switch (s) {
    case HF_OK:
        return kExitOk;
    case HF_ERR_CONFIG:
        return kExitConfig;
    case HF_ERR_DATA:
    case HF_ERR_DOMAIN:
        return kExitData;
    case HF_ERR_CONVERGENCE:
        return kExitConvergence;
    case HF_ERR_IO:
        return kExitIo;
    case HF_ERR_INVALID_ARGUMENT:
        return kExitUsage;
    case HF_ERR_INTERNAL:
        break;
    }
    return kExitInternal;
}

struct Failure
{
    int code;
};

void check(hf_status s)
{
    if (s != HF_OK) {
        std::cerr << "hospflow: " << hf_status_name(s) << ": " << hf_last_error() << '\n';
        throw Failure{exit_code(s)};
    }
}

template <class T, void (*Free)(T*)>
struct Handle
{
    T* p = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle()
    {
        Free(p);
    }
    T** out()
    {
        return &p;
    }
};

using Config = Handle<hf_config, hf_config_free>;
using Data = Handle<hf_dataset, hf_dataset_free>;
using Samples = Handle<hf_samples, hf_samples_free>;
using Fit = Handle<hf_fit, hf_fit_free>;

struct Options
{
    std::string config;
    std::string dataset;
    std::string samples;
    std::string out = "out";
    std::uint64_t seed = 1;
    unsigned threads = 0;
    bool fast = false;

    std::string truth;
    std::string admissions;
    int multiplier = 1;
    std::size_t days = 120;
};

void load_config(const Options& o, Config& c)
{
    if (o.config.empty()) {
        check(hf_config_default(c.out()));
    }
    else {
        check(hf_config_load(o.config.c_str(), c.out()));
    }
    if (o.fast) {
        check(hf_config_set_fast(c.p));
    }
}

std::string out_file(const Options& o, const char* name)
{
    std::error_code ec;
    std::filesystem::create_directories(o.out, ec);
    if (ec) {
        std::cerr << "hospflow: cannot create '" << o.out << "': " << ec.message() << '\n';
        throw Failure{kExitIo};
    }
    return (std::filesystem::path(o.out) / name).string();
}

/// Reads the `admissions` column of a CSV file.
std::vector<int> read_admissions(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        std::cerr << "hospflow: cannot open '" << path << "'\n";
        throw Failure{kExitIo};
    }
    std::string line;
    std::getline(in, line);
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            if (!cell.empty() && cell.back() == '\r') {
                cell.pop_back();
            }
            header.push_back(cell);
        }
    }
    std::size_t col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "admissions") {
            col = i;
        }
    }
    if (col == header.size()) {
        std::cerr << "hospflow: " << path << ": no 'admissions' column\n";
        throw Failure{kExitData};
    }
    std::vector<int> values;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") {
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        for (std::size_t i = 0; i <= col && std::getline(ss, cell, ','); ++i) {
        }
        std::size_t used = 0;
        int v = -1;
        try {
            v = std::stoi(cell, &used);
        }
        catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || v < 0) {
            std::cerr << "hospflow: " << path << ":" << row << ": bad admissions value '" << cell << "'\n";
            throw Failure{kExitData};
        }
        values.push_back(v);
    }
    return values;
}

void run_simulate(const Options& o)
{
    Config c;
    load_config(o, c);
    Samples truth;
    if (o.truth.empty()) {
        check(hf_samples_prior_mean(c.p, truth.out()));
    }
    else {
        check(hf_samples_load(c.p, o.truth.c_str(), truth.out()));
    }
    Data d;
    if (o.admissions.empty()) {
        check(hf_dataset_simulate(c.p, truth.p, nullptr, o.days, o.multiplier, o.seed, d.out()));
    }
    else {
        const auto adm = read_admissions(o.admissions);
        check(hf_dataset_simulate(c.p, truth.p, adm.data(), adm.size(), o.multiplier, o.seed, d.out()));
    }
    check(hf_dataset_write(d.p, out_file(o, "dataset.csv").c_str()));
    check(hf_samples_write(truth.p, out_file(o, "truth.csv").c_str()));
}

void run_fit(const Options& o)
{
    Config c;
    load_config(o, c);
    Data d;
    check(hf_dataset_load(c.p, o.dataset.c_str(), d.out()));
    Fit f;
    const hf_status s = hf_fit_run(c.p, d.p, o.seed, o.threads, f.out());
    if (f.p) {
        check(hf_fit_write_diagnostics(f.p, o.out.c_str()));
    }
    check(s);
    Samples samples;
    check(hf_fit_samples(f.p, samples.out()));
    check(hf_samples_write(samples.p, out_file(o, "samples.csv").c_str()));
    std::size_t n = 0;
    check(hf_samples_count(samples.p, &n));
    std::cout << "wrote " << n << " samples to " << out_file(o, "samples.csv") << '\n';
}

using Command = hf_status (*)(const hf_config*, const hf_dataset*, const hf_samples*, uint64_t, const char*);

void run_with_samples(const Options& o, Command command)
{
    Config c;
    load_config(o, c);
    Data d;
    check(hf_dataset_load(c.p, o.dataset.c_str(), d.out()));
    Samples s;
    check(hf_samples_load(c.p, o.samples.c_str(), s.out()));
    check(command(c.p, d.p, s.p, o.seed, o.out.c_str()));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hospital census forecasting with an explicit-duration patient model fitted by ABC."};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub, bool needs_dataset, bool needs_samples) {
        sub->add_option("--config", o.config, "INI configuration file")->check(CLI::ExistingFile);
        auto* ds = sub->add_option("--dataset", o.dataset, "counts CSV");
        if (needs_dataset) {
            ds->required();
        }
        auto* sm = sub->add_option("--samples", o.samples, "posterior samples CSV");
        if (needs_samples) {
            sm->required();
        }
        sub->add_option("--out", o.out, "output directory")->capture_default_str();
        sub->add_option("--seed", o.seed, "random seed")->capture_default_str();
        sub->add_option("--threads", o.threads, "worker threads, 0 for all cores")->capture_default_str();
        sub->add_flag("--fast", o.fast, "short schedule for smoke runs");
    };

    auto* simulate = app.add_subcommand("simulate", "simulate a synthetic dataset");
    common(simulate, false, false);
    simulate->add_option("--truth", o.truth, "parameter CSV; the first row is used (default: prior centre)");
    simulate->add_option("--admissions", o.admissions, "CSV with an admissions column");
    simulate->add_option("--multiplier", o.multiplier, "admissions multiplier")
        ->check(CLI::IsMember({1, 3, 6, 9}))
        ->capture_default_str();
    simulate->add_option("--days", o.days, "days of the built-in admissions wave")->capture_default_str();

    auto* fit = app.add_subcommand("fit", "fit the model to the training period");
    common(fit, true, false);
    auto* forecast = app.add_subcommand("forecast", "forecast every dataset day");
    common(forecast, true, true);
    auto* evaluate = app.add_subcommand("evaluate", "test-period MAE, baselines and coverage");
    common(evaluate, true, true);
    auto* whatif = app.add_subcommand("whatif", "baseline versus intervention forecasts");
    common(whatif, true, true);

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*simulate) {
            run_simulate(o);
        }
        else if (*fit) {
            run_fit(o);
        }
        else if (*forecast) {
            run_with_samples(o, hf_forecast_write);
        }
        else if (*evaluate) {
            run_with_samples(o, hf_evaluate_write);
        }
        else if (*whatif) {
            run_with_samples(o, hf_whatif_write);
        }
    }
    catch (const Failure& f) {
        return f.code;
    }
    return kExitOk;
}
