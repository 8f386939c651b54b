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
#include "hospflow/baselines.hpp"

#include "hospflow/errors.hpp"
#include "hospflow/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>

namespace hospflow
{

std::vector<double> median_forecast(std::span<const double> train, std::size_t horizon)
{
    if (train.empty()) {
        fail(ErrorKind::InvalidArgument, "median_forecast: empty training series");
    }
    std::vector<double> sorted(train.begin(), train.end());
    const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>((sorted.size() - 1) / 2);
    std::nth_element(sorted.begin(), mid, sorted.end());
    return std::vector<double>(horizon, *mid);
}

std::vector<double> lr_features(LrFeatureMode mode, int day, std::span<const int> admissions)
{
    std::vector<double> x{static_cast<double>(day)};
    if (mode == LrFeatureMode::DayPlusAdmissions21) {
        for (int lag = 1; lag <= kLrAdmissionLags; ++lag) {
            const int d = day - lag;
            const bool known = d >= 1 && static_cast<std::size_t>(d) <= admissions.size();
            x.push_back(known ? static_cast<double>(admissions[static_cast<std::size_t>(d - 1)]) : 0.0);
        }
    }
    return x;
}

LrForecast bayes_lr_forecast(std::span<const double> train, std::span<const int> admissions, LrFeatureMode mode,
                             std::size_t horizon, std::size_t n_samples, std::uint64_t seed, const LrPrior& prior)
{
    const std::size_t n = train.size();
    if (n == 0) {
        fail(ErrorKind::InvalidArgument, "bayes_lr_forecast: empty training series");
    }
    if (mode == LrFeatureMode::DayPlusAdmissions21 && admissions.size() < n + horizon) {
        fail(ErrorKind::Data, "bayes_lr_forecast: admissions do not cover the forecast horizon");
    }
    if (!(prior.coefficient_precision > 0.0 && prior.noise_shape > 0.0 && prior.noise_scale > 0.0)) {
        fail(ErrorKind::InvalidArgument, "bayes_lr_forecast: prior parameters must be positive");
    }

    const std::size_t total = n + horizon;
    std::vector<std::vector<double>> raw(total);
    for (std::size_t t = 0; t < total; ++t) {
        raw[t] = lr_features(mode, static_cast<int>(t + 1), admissions);
    }
    const std::size_t n_raw = raw[0].size();

    LrForecast out;
    std::vector<std::size_t> kept;
    std::vector<double> centre;
    std::vector<double> spread;
    for (std::size_t j = 0; j < n_raw; ++j) {
        double mean = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            mean += raw[t][j];
        }
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            var += (raw[t][j] - mean) * (raw[t][j] - mean);
        }
        var /= static_cast<double>(n);
        if (var <= 0.0) {
            out.dropped_features.push_back(j);
            continue;
        }
        kept.push_back(j);
        centre.push_back(mean);
        spread.push_back(std::sqrt(var));
    }
    if (!out.dropped_features.empty()) {
        std::cerr << "warning: bayes_lr: dropped " << out.dropped_features.size()
                  << " zero-variance feature(s)\n";
    }

    const auto p = static_cast<Eigen::Index>(kept.size() + 1);
    Eigen::MatrixXd X(static_cast<Eigen::Index>(total), p);
    for (std::size_t t = 0; t < total; ++t) {
        const auto r = static_cast<Eigen::Index>(t);
        X(r, 0) = 1.0;
        for (std::size_t k = 0; k < kept.size(); ++k) {
            X(r, static_cast<Eigen::Index>(k + 1)) = (raw[t][kept[k]] - centre[k]) / spread[k];
        }
    }
    const auto Xtr = X.topRows(static_cast<Eigen::Index>(n));
    const Eigen::Map<const Eigen::VectorXd> y(train.data(), static_cast<Eigen::Index>(n));

    Eigen::MatrixXd precision = Xtr.transpose() * Xtr;
    precision.diagonal().tail(p - 1).array() += prior.coefficient_precision;
    const Eigen::LLT<Eigen::MatrixXd> llt(precision);
    if (llt.info() != Eigen::Success) {
        fail(ErrorKind::Data, "bayes_lr_forecast: singular design");
    }
    const Eigen::VectorXd beta = llt.solve(Xtr.transpose() * y);
    out.coefficients.assign(beta.data(), beta.data() + beta.size());

    const double shape = prior.noise_shape + 0.5 * static_cast<double>(n);
    const double quad = std::max(0.0, y.squaredNorm() - beta.dot(precision * beta));
    const double scale = prior.noise_scale + 0.5 * quad;

    const auto Xte = X.bottomRows(static_cast<Eigen::Index>(horizon));
    const Eigen::VectorXd mean = Xte * beta;
    out.mean.assign(mean.data(), mean.data() + mean.size());

    // Covariance factor: beta = mean + sigma * L^{-T} z with precision = L L^T.
    const Eigen::MatrixXd L = llt.matrixL();
    Rng rng(seed);
    std::gamma_distribution<double> gamma(shape, 1.0);
    out.samples.reserve(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s) {
        const double sigma2 = scale / std::max(gamma(rng), 1e-300);
        const double sigma = std::sqrt(sigma2);
        Eigen::VectorXd z(p);
        for (Eigen::Index j = 0; j < p; ++j) {
            z(j) = sample_normal(0.0, 1.0, rng);
        }
        const Eigen::VectorXd b = beta + sigma * L.transpose().triangularView<Eigen::Upper>().solve(z);
        std::vector<double> path(horizon);
        for (std::size_t t = 0; t < horizon; ++t) {
            path[t] = Xte.row(static_cast<Eigen::Index>(t)).dot(b) + sigma * sample_normal(0.0, 1.0, rng);
        }
        out.samples.push_back(std::move(path));
    }
    return out;
}

} // namespace hospflow
