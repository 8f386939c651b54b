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
#ifndef HOSPFLOW_H
#define HOSPFLOW_H

#include <stddef.h>
#include <stdint.h>

#if defined(HOSPFLOW_BUILDING_LIBRARY)
#define HF_API __attribute__((visibility("default")))
#else
#define HF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hf_status
{
    HF_OK = 0,
    HF_ERR_INVALID_ARGUMENT = 1,
    HF_ERR_CONFIG = 2,
    HF_ERR_DATA = 3,
    HF_ERR_CONVERGENCE = 4,
    HF_ERR_IO = 5,
    HF_ERR_DOMAIN = 6,
    HF_ERR_INTERNAL = 7
} hf_status;

typedef struct hf_config hf_config;
typedef struct hf_dataset hf_dataset;
typedef struct hf_samples hf_samples;
typedef struct hf_fit hf_fit;

/* Message of the last failed call on this thread; empty after success. */
HF_API const char* hf_last_error(void);
HF_API const char* hf_status_name(hf_status status);
HF_API const char* hf_version(void);

/* Configuration */
HF_API hf_status hf_config_default(hf_config** out);
HF_API hf_status hf_config_load(const char* path, hf_config** out);
HF_API hf_status hf_config_parse(const char* text, hf_config** out);
/* Shrinks the schedule, ensemble and evaluation batches for smoke runs. */
HF_API hf_status hf_config_set_fast(hf_config* config);
HF_API hf_status hf_config_max_duration(const hf_config* config, int* out);
HF_API void hf_config_free(hf_config* config);

/* Datasets */
HF_API hf_status hf_dataset_load(const hf_config* config, const char* path, hf_dataset** out);
/* Simulates G, I, V, R, T counts under the first row of `truth`. With
   admissions == NULL a built-in single-hospital wave of n_days is used.
   Admissions are multiplied by `multiplier` in both cases. */
HF_API hf_status hf_dataset_simulate(const hf_config* config, const hf_samples* truth, const int* admissions,
                                     size_t n_days, int multiplier, uint64_t seed, hf_dataset** out);
HF_API hf_status hf_dataset_write(const hf_dataset* dataset, const char* path);
HF_API hf_status hf_dataset_num_days(const hf_dataset* dataset, size_t* out);
HF_API hf_status hf_dataset_train_days(const hf_dataset* dataset, size_t* out);
HF_API void hf_dataset_free(hf_dataset* dataset);

/* Parameter samples */
HF_API hf_status hf_samples_load(const hf_config* config, const char* path, hf_samples** out);
/* A single sample at the prior centre: Beta means, mode and log10-temperature locations. */
HF_API hf_status hf_samples_prior_mean(const hf_config* config, hf_samples** out);
HF_API hf_status hf_samples_write(const hf_samples* samples, const char* path);
HF_API hf_status hf_samples_count(const hf_samples* samples, size_t* out);
HF_API hf_status hf_samples_get(const hf_samples* samples, size_t index, const char* param, double* out);
HF_API hf_status hf_samples_set(hf_samples* samples, size_t index, const char* param, double value);
HF_API void hf_samples_free(hf_samples* samples);

/* Fitting. On HF_ERR_CONVERGENCE *out still holds the chains so their
   diagnostics can be written. */
HF_API hf_status hf_fit_run(const hf_config* config, const hf_dataset* dataset, uint64_t seed, unsigned threads,
                            hf_fit** out);
HF_API hf_status hf_fit_samples(const hf_fit* fit, hf_samples** out);
/* Writes trace.csv, acceptance.csv and chains.csv into `dir`. */
HF_API hf_status hf_fit_write_diagnostics(const hf_fit* fit, const char* dir);
HF_API void hf_fit_free(hf_fit* fit);

/* Commands writing their files into `dir` (created if missing). */
HF_API hf_status hf_forecast_write(const hf_config* config, const hf_dataset* dataset, const hf_samples* samples,
                                   uint64_t seed, const char* dir);
HF_API hf_status hf_evaluate_write(const hf_config* config, const hf_dataset* dataset, const hf_samples* samples,
                                   uint64_t seed, const char* dir);
HF_API hf_status hf_whatif_write(const hf_config* config, const hf_dataset* dataset, const hf_samples* samples,
                                 uint64_t seed, const char* dir);

/* Duration pmf for days 1..max_duration into out[0..max_duration-1]. */
HF_API hf_status hf_duration_pmf(double mode, double temperature, int max_duration, double* out, size_t len);

#ifdef __cplusplus
}
#endif

#endif /* HOSPFLOW_H */
