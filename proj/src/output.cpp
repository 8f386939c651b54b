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
#include "hospflow/output.hpp"

#include "hospflow/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace hospflow
{

namespace
{

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path);
    if (!out) {
        fail(ErrorKind::Io, "cannot write '" + path + "'");
    }
    return out;
}

void close_out(std::ofstream& out, const std::string& path)
{
    out.flush();
    if (!out) {
        fail(ErrorKind::Io, "error writing '" + path + "'");
    }
}

std::string day_label(std::span<const std::string> dates, int start_day, std::size_t i)
{
    if (!dates.empty()) {
        if (i >= dates.size()) {
            fail(ErrorKind::InvalidArgument, "fewer dates than output rows");
        }
        return dates[i];
    }
    return std::to_string(start_day + static_cast<int>(i));
}

std::string level_name(double level)
{
    return "p" + format_double(level);
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

} // namespace

std::string format_double(double value)
{
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        fail(ErrorKind::Io, "cannot format number");
    }
    return std::string(buf.data(), ptr);
}

void write_samples_csv(const std::string& path, std::span<const ModelParams> samples)
{
    auto out = open_out(path);
    const auto ids = all_params();
    for (std::size_t j = 0; j < ids.size(); ++j) {
        out << (j ? "," : "") << param_name(ids[j]);
    }
    out << '\n';
    for (const auto& p : samples) {
        for (std::size_t j = 0; j < ids.size(); ++j) {
            out << (j ? "," : "") << format_double(get_value(p, ids[j]));
        }
        out << '\n';
    }
    close_out(out, path);
}

std::vector<ModelParams> read_samples_csv(const std::string& path, int max_duration)
{
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::Io, "cannot open samples '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        fail(ErrorKind::Data, path + ": empty samples file");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    std::vector<ParamId> columns;
    for (const auto& name : split(line)) {
        const auto id = parse_param_name(name);
        if (!id) {
            fail(ErrorKind::Data, path + ": unknown parameter column '" + name + "'");
        }
        columns.push_back(*id);
    }
    for (const auto id : all_params()) {
        if (std::find(columns.begin(), columns.end(), id) == columns.end()) {
            fail(ErrorKind::Data, path + ": missing parameter column '" + std::string(param_name(id)) + "'");
        }
    }
    std::vector<ModelParams> samples;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto fields = split(line);
        if (fields.size() != columns.size()) {
            fail(ErrorKind::Data, path + ":" + std::to_string(line_no) + ": wrong number of fields");
        }
        ModelParams p;
        p.max_duration = max_duration;
        for (std::size_t j = 0; j < fields.size(); ++j) {
            double v = 0.0;
            const auto& f = fields[j];
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc{} || ptr != f.data() + f.size()) {
                fail(ErrorKind::Data, path + ":" + std::to_string(line_no) + ": bad number '" + f + "'");
            }
            set_value(p, columns[j], v);
        }
        try {
            p.validate();
        }
        catch (const Error& e) {
            fail(ErrorKind::Data, path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        samples.push_back(p);
    }
    return samples;
}

void write_census_csv(const std::string& path, const CensusSeries& counts, std::span<const std::string> dates)
{
    auto out = open_out(path);
    out << "date";
    for (const auto& l : counts.labels()) {
        out << ',' << l;
    }
    out << '\n';
    for (std::size_t t = 0; t < counts.num_days(); ++t) {
        out << day_label(dates, counts.start_day(), t);
        for (std::size_t k = 0; k < counts.labels().size(); ++k) {
            out << ',' << format_double(counts.column(k)[t]);
        }
        out << '\n';
    }
    close_out(out, path);
}

void write_forecast_summary_csv(const std::string& path, const ForecastSummary& summary,
                                std::span<const std::string> dates)
{
    auto out = open_out(path);
    out << "date,label,mean";
    for (const double l : summary.levels) {
        out << ',' << level_name(l);
    }
    out << '\n';
    for (std::size_t t = 0; t < summary.num_days; ++t) {
        const auto day = day_label(dates, summary.start_day, t);
        for (const auto& s : summary.labels) {
            out << day << ',' << s.label << ',' << format_double(s.mean[t]);
            for (const auto& p : s.percentiles) {
                out << ',' << format_double(p[t]);
            }
            out << '\n';
        }
    }
    close_out(out, path);
}

ForecastSummary read_forecast_summary_csv(const std::string& path, std::vector<std::string>* dates)
{
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::Io, "cannot open forecast '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        fail(ErrorKind::Data, path + ": empty forecast file");
    }
    const auto header = split(line);
    if (header.size() < 3 || header[0] != "date" || header[1] != "label" || header[2] != "mean") {
        fail(ErrorKind::Data, path + ": expected header date,label,mean,...");
    }
    ForecastSummary summary;
    for (std::size_t j = 3; j < header.size(); ++j) {
        double level = 0.0;
        const auto& h = header[j];
        const auto [ptr, ec] = std::from_chars(h.data() + 1, h.data() + h.size(), level);
        if (h.empty() || h[0] != 'p' || ec != std::errc{} || ptr != h.data() + h.size()) {
            fail(ErrorKind::Data, path + ": bad percentile column '" + h + "'");
        }
        summary.levels.push_back(level);
    }
    std::vector<std::string> days;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto fields = split(line);
        if (fields.size() != header.size()) {
            fail(ErrorKind::Data, path + ":" + std::to_string(line_no) + ": wrong number of fields");
        }
        if (days.empty() || days.back() != fields[0]) {
            days.push_back(fields[0]);
        }
        auto it = std::find_if(summary.labels.begin(), summary.labels.end(),
                               [&](const LabelSummary& l) { return l.label == fields[1]; });
        if (it == summary.labels.end()) {
            summary.labels.push_back({fields[1], {}, std::vector<std::vector<double>>(summary.levels.size())});
            it = summary.labels.end() - 1;
        }
        std::vector<double> values;
        for (std::size_t j = 2; j < fields.size(); ++j) {
            double v = 0.0;
            const auto& f = fields[j];
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc{} || ptr != f.data() + f.size()) {
                fail(ErrorKind::Data, path + ":" + std::to_string(line_no) + ": bad number '" + f + "'");
            }
            values.push_back(v);
        }
        it->mean.push_back(values[0]);
        for (std::size_t j = 1; j < values.size(); ++j) {
            it->percentiles[j - 1].push_back(values[j]);
        }
    }
    summary.num_days = days.size();
    for (const auto& l : summary.labels) {
        if (l.mean.size() != days.size()) {
            fail(ErrorKind::Data, path + ": label '" + l.label + "' does not cover every day");
        }
    }
    int first = 0;
    const bool numeric = !days.empty() &&
                         std::from_chars(days[0].data(), days[0].data() + days[0].size(), first).ptr ==
                             days[0].data() + days[0].size();
    summary.start_day = numeric ? first : 1;
    if (dates) {
        *dates = std::move(days);
    }
    return summary;
}

void write_forecast_summary_json(const std::string& path, const ForecastSummary& summary,
                                 std::span<const std::string> dates)
{
    nlohmann::json days = nlohmann::json::array();
    for (std::size_t t = 0; t < summary.num_days; ++t) {
        days.push_back(day_label(dates, summary.start_day, t));
    }
    nlohmann::json labels = nlohmann::json::object();
    for (const auto& s : summary.labels) {
        nlohmann::json entry;
        entry["mean"] = s.mean;
        for (std::size_t j = 0; j < summary.levels.size(); ++j) {
            entry[level_name(summary.levels[j])] = s.percentiles[j];
        }
        labels[s.label] = entry;
    }
    auto out = open_out(path);
    out << nlohmann::json{{"dates", days}, {"levels", summary.levels}, {"labels", labels}}.dump(2) << '\n';
    close_out(out, path);
}

void write_mae_csv(const std::string& path, std::span<const MethodMae> reports)
{
    auto out = open_out(path);
    out << "method,label,mae,lower,upper\n";
    for (const auto& r : reports) {
        for (const auto& e : r.report.entries) {
            out << r.method << ',' << e.label << ',' << format_double(e.mean) << ',' << format_double(e.lower)
                << ',' << format_double(e.upper) << '\n';
        }
    }
    close_out(out, path);
}

void write_mae_json(const std::string& path, std::span<const MethodMae> reports)
{
    nlohmann::json root = nlohmann::json::object();
    for (const auto& r : reports) {
        nlohmann::json m = nlohmann::json::object();
        for (const auto& e : r.report.entries) {
            m[e.label] = {{"mae", e.mean}, {"lower", e.lower}, {"upper", e.upper}};
        }
        root[r.method] = m;
    }
    auto out = open_out(path);
    out << root.dump(2) << '\n';
    close_out(out, path);
}

void write_coverage_csv(const std::string& path, std::span<const CoverageRow> rows)
{
    auto out = open_out(path);
    out << "label,target,coverage\n";
    for (const auto& r : rows) {
        out << r.label << ',' << format_double(r.target) << ',' << format_double(r.observed) << '\n';
    }
    close_out(out, path);
}

void write_trace_csv(const std::string& path, std::span<const ChainResult> chains)
{
    auto out = open_out(path);
    out << "chain,sweep,phase,eps,last_accepted_distance,passed,accepted\n";
    for (std::size_t c = 0; c < chains.size(); ++c) {
        for (const auto& r : chains[c].trace) {
            out << c << ',' << r.sweep << ',' << (r.phase == Phase::BurnIn ? "burn_in" : "sampling") << ','
                << format_double(r.eps) << ',' << format_double(r.last_accepted_distance) << ',' << r.passed << ','
                << r.accepted << '\n';
        }
    }
    close_out(out, path);
}

void write_acceptance_csv(const std::string& path, std::span<const ChainResult> chains)
{
    auto out = open_out(path);
    out << "chain,param,proposed,accepted,rate\n";
    const auto ids = all_params();
    for (std::size_t c = 0; c < chains.size(); ++c) {
        for (std::size_t j = 0; j < ids.size(); ++j) {
            const auto n = chains[c].proposed[j];
            const auto a = chains[c].accepted[j];
            out << c << ',' << param_name(ids[j]) << ',' << n << ',' << a << ','
                << format_double(n ? static_cast<double>(a) / static_cast<double>(n) : 0.0) << '\n';
        }
    }
    close_out(out, path);
}

void write_events_csv(const std::string& path, std::span<const ChainResult> chains)
{
    auto out = open_out(path);
    out << "chain,proposal,param,distance,accepted\n";
    for (std::size_t c = 0; c < chains.size(); ++c) {
        for (const auto& e : chains[c].events) {
            out << c << ',' << e.proposal << ',' << param_name(e.param) << ',' << format_double(e.distance) << ','
                << (e.accepted ? 1 : 0) << '\n';
        }
    }
    close_out(out, path);
}

void write_chains_csv(const std::string& path, const FitResult& fit)
{
    auto out = open_out(path);
    out << "chain,final_eps,best_burn_in_eps,final_distance,samples,simulation_failures,included\n";
    for (std::size_t c = 0; c < fit.chains.size(); ++c) {
        const auto& r = fit.chains[c];
        const bool in = std::find(fit.included.begin(), fit.included.end(), c) != fit.included.end();
        out << c << ',' << format_double(r.final_eps) << ',' << format_double(r.best_burn_in_eps) << ','
            << format_double(r.final_distance) << ',' << r.samples.size() << ',' << r.simulation_failures << ','
            << (in ? 1 : 0) << '\n';
    }
    close_out(out, path);
}

} // namespace hospflow
