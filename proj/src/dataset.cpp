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
#include "hospflow/dataset.hpp"

#include "hospflow/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace hospflow
{

namespace
{

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '"' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    for (;;) {
        const std::size_t next = line.find(sep, pos);
        out.push_back(trim(line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
        if (next == std::string_view::npos) {
            break;
        }
        pos = next + 1;
    }
    return out;
}

std::optional<double> parse_number(std::string_view text)
{
    if (text.empty()) {
        return std::nullopt;
    }
    if (text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

[[noreturn]] void row_error(const std::string& path, std::size_t line, const std::string& what)
{
    fail(ErrorKind::Data, path + ": line " + std::to_string(line) + ": " + what);
}

std::string format_number(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, ptr) : std::to_string(v);
}

} // namespace

ColumnSpec parse_column_expression(std::string label, std::string_view expression)
{
    ColumnSpec spec{std::move(label), {}};
    int sign = 1;
    std::size_t pos = 0;
    const auto flush = [&](std::string_view token) {
        token = trim(token);
        if (token.empty()) {
            fail(ErrorKind::Config, "malformed column expression for '" + spec.label + "'");
        }
        spec.terms.emplace_back(sign, std::string(token));
    };
    for (std::size_t i = 0; i < expression.size(); ++i) {
        const char c = expression[i];
        // operators need surrounding whitespace so column names may contain '-'
        const bool is_op = (c == '+' || c == '-') && i > 0 && i + 1 < expression.size() &&
                           expression[i - 1] == ' ' && expression[i + 1] == ' ';
        if (is_op) {
            flush(expression.substr(pos, i - pos));
            sign = c == '+' ? 1 : -1;
            pos = i + 1;
        }
    }
    flush(expression.substr(pos));
    return spec;
}

std::optional<std::chrono::sys_days> parse_iso_date(std::string_view text)
{
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    char tail = 0;
    const std::string s(trim(text));
    if (std::sscanf(s.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3 || s.size() != 10) {
        return std::nullopt;
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!ymd.ok()) {
        return std::nullopt;
    }
    return std::chrono::sys_days{ymd};
}

std::string format_iso_date(std::chrono::sys_days day)
{
    const std::chrono::year_month_day ymd{day};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()));
    return buf;
}

std::optional<std::vector<Stage>> resolve_label(std::string_view label, std::span<const LabelMapping> custom)
{
    for (const auto& m : custom) {
        if (m.label == label) {
            return m.stages;
        }
    }
    return parse_stage_set(label);
}

CensusSeries Dataset::train() const
{
    return observed.slice(1, train_days);
}

CensusSeries Dataset::test() const
{
    return observed.slice(static_cast<int>(train_days) + 1, test_days());
}

std::optional<int> Dataset::day_of(std::string_view iso_date) const
{
    const auto target = parse_iso_date(iso_date);
    if (!target || dates.empty()) {
        return std::nullopt;
    }
    const auto first = parse_iso_date(dates.front());
    if (!first) {
        return std::nullopt;
    }
    return static_cast<int>((*target - *first).count()) + 1;
}

void Dataset::validate() const
{
    if (dates.size() != admissions.size() || observed.num_days() != admissions.size()) {
        fail(ErrorKind::Data, "dataset columns differ in length");
    }
    if (train_days > num_days()) {
        fail(ErrorKind::Data, "training period longer than the dataset");
    }
    if (mapping.size() != observed.labels().size()) {
        fail(ErrorKind::Data, "every observed label needs a stage mapping");
    }
}

Dataset load_counts_csv(const std::string& path, const CsvLoadOptions& options)
{
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::Io, "cannot open '" + path + "'");
    }
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            for (auto h : split(line, ',')) {
                header.emplace_back(h);
            }
            break;
        }
    }
    if (header.empty()) {
        fail(ErrorKind::Data, path + ": missing header");
    }
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (!col.emplace(header[i], i).second) {
            fail(ErrorKind::Data, path + ": duplicate column '" + header[i] + "'");
        }
    }
    const auto require = [&](const std::string& name) {
        const auto it = col.find(name);
        if (it == col.end()) {
            fail(ErrorKind::Data, path + ": required column '" + name + "' not found");
        }
        return it->second;
    };
    const std::size_t date_col = require(options.date_column);
    const std::size_t adm_col = require(options.admissions_column);

    std::vector<ColumnSpec> specs = options.columns;
    if (specs.empty()) {
        for (const auto& h : header) {
            if (h != options.date_column && h != options.admissions_column) {
                specs.push_back({h, {{1, h}}});
            }
        }
    }
    Dataset ds;
    for (const auto& spec : specs) {
        for (const auto& term : spec.terms) {
            require(term.second);
        }
        const auto stages = resolve_label(spec.label, options.custom_labels);
        if (!stages) {
            fail(ErrorKind::Config, "label '" + spec.label + "' is not a stage set and has no mapping");
        }
        ds.mapping.push_back({spec.label, *stages});
    }

    std::vector<std::vector<double>> values(specs.size());
    std::vector<int> admissions;
    std::optional<std::chrono::sys_days> previous;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() != header.size()) {
            row_error(path, line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                         std::to_string(cells.size()));
        }
        const auto date = parse_iso_date(cells[date_col]);
        if (!date) {
            row_error(path, line_no, "malformed date '" + std::string(cells[date_col]) + "'");
        }
        if (previous && *date - *previous != std::chrono::days{1}) {
            row_error(path, line_no, "dates must be consecutive and increasing");
        }
        previous = date;
        ds.dates.push_back(format_iso_date(*date));

        const auto adm = parse_number(cells[adm_col]);
        if (!adm) {
            row_error(path, line_no, "missing or malformed admissions value");
        }
        if (*adm < 0.0 || *adm != std::floor(*adm)) {
            row_error(path, line_no, "admissions must be a non-negative integer");
        }
        admissions.push_back(static_cast<int>(*adm));

        for (std::size_t k = 0; k < specs.size(); ++k) {
            double total = 0.0;
            for (const auto& [sign, name] : specs[k].terms) {
                const auto v = parse_number(cells[col.at(name)]);
                if (!v) {
                    row_error(path, line_no, "missing or malformed value in column '" + name + "'");
                }
                total += sign * *v;
            }
            if (total < 0.0) {
                row_error(path, line_no, "negative count for label '" + specs[k].label + "'");
            }
            values[k].push_back(total);
        }
    }

    const int shift = options.admissions_shift;
    if (shift < 0) {
        fail(ErrorKind::Config, "admissions_shift must be non-negative");
    }
    if (static_cast<std::size_t>(shift) >= admissions.size() && shift > 0) {
        fail(ErrorKind::Data, path + ": admissions shift leaves no rows");
    }
    if (shift > 0) {
        std::rotate(admissions.begin(), admissions.begin() + shift, admissions.end());
        const std::size_t keep = admissions.size() - static_cast<std::size_t>(shift);
        admissions.resize(keep);
        ds.dates.resize(keep);
        for (auto& v : values) {
            v.resize(keep);
        }
    }
    ds.admissions = std::move(admissions);
    ds.observed = CensusSeries(1, ds.admissions.size(), {});
    for (std::size_t k = 0; k < specs.size(); ++k) {
        ds.observed.add(specs[k].label, std::move(values[k]));
    }
    ds.train_days = ds.num_days();
    ds.validate();
    return ds;
}

void write_dataset_csv(const std::string& path, const Dataset& dataset)
{
    std::ofstream out(path);
    if (!out) {
        fail(ErrorKind::Io, "cannot write '" + path + "'");
    }
    out << "date,admissions";
    for (const auto& label : dataset.observed.labels()) {
        out << ',' << label;
    }
    out << '\n';
    for (std::size_t t = 0; t < dataset.num_days(); ++t) {
        out << dataset.dates[t] << ',' << dataset.admissions[t];
        for (std::size_t k = 0; k < dataset.observed.labels().size(); ++k) {
            out << ',' << format_number(dataset.observed.column(k)[t]);
        }
        out << '\n';
    }
    if (!out) {
        fail(ErrorKind::Io, "failed writing '" + path + "'");
    }
}

std::vector<double> smooth_counts(std::span<const double> series, int window, std::size_t train_days)
{
    if (window < 1 || window % 2 == 0) {
        fail(ErrorKind::Config, "smoothing window must be a positive odd number");
    }
    const auto n = static_cast<long long>(series.size());
    const long long half = window / 2;
    const auto train = static_cast<long long>(std::min(train_days, series.size()));
    std::vector<double> out(series.size());
    for (long long t = 0; t < n; ++t) {
        long long lo = std::max(0LL, t - half);
        long long hi = std::min(n - 1, t + half);
        if (t < train) {
            hi = std::min(hi, train - 1);
        }
        double total = 0.0;
        for (long long i = lo; i <= hi; ++i) {
            total += series[static_cast<std::size_t>(i)];
        }
        out[static_cast<std::size_t>(t)] = total / static_cast<double>(hi - lo + 1);
    }
    return out;
}

} // namespace hospflow
