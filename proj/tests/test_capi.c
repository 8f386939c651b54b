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

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <sys/stat.h>

static int failures = 0;

#define EXPECT(cond)                                                                                                   \
    do {                                                                                                               \
        if (!(cond)) {                                                                                                 \
            fprintf(stderr, "%s:%d: expectation failed: %s (%s)\n", __FILE__, __LINE__, #cond, hf_last_error());       \
            ++failures;                                                                                                \
        }                                                                                                              \
    } while (0)

static int file_exists(const char* dir, const char* name)
{
    char path[1024];
    struct stat st;
    snprintf(path, sizeof path, "%s/%s", dir, name);
    return stat(path, &st) == 0 && st.st_size > 0;
}

int main(int argc, char** argv)
{
    const char* dir = argc > 1 ? argv[1] : "capi_out";
    char path[1024];
    hf_config* cfg = NULL;
    hf_config* bad = NULL;
    hf_samples* truth = NULL;
    hf_samples* loaded = NULL;
    hf_samples* posterior = NULL;
    hf_dataset* ds = NULL;
    hf_dataset* reread = NULL;
    hf_fit* fit = NULL;
    size_t n = 0;
    int max_duration = 0;
    double value = 0.0;
    double pmf[22];
    double total = 0.0;

    mkdir(dir, 0755);
    EXPECT(strlen(hf_version()) > 0);
    EXPECT(strcmp(hf_status_name(HF_ERR_CONFIG), hf_status_name(HF_ERR_DATA)) != 0);

    EXPECT(hf_config_parse("[abc]\ndecay = 1.5\n", &bad) == HF_ERR_CONFIG);
    EXPECT(bad == NULL);
    EXPECT(strlen(hf_last_error()) > 0);
    EXPECT(hf_config_load("/nonexistent/config.ini", &bad) == HF_ERR_IO);
    EXPECT(hf_config_parse(NULL, &bad) == HF_ERR_INVALID_ARGUMENT);

    EXPECT(hf_config_parse("[abc]\nchains = 2\nsamples_per_chain = 10\nburn_in_sweeps = 40\n"
                           "[data]\ntrain_days = 40\n[evaluate]\nbatch_size = 5\nn_batches = 4\nlr_samples = 20\n"
                           "[recovery_scenario]\nreduction_fraction = 0.25\n",
                           &cfg) == HF_OK);
    EXPECT(strlen(hf_last_error()) == 0);
    EXPECT(hf_config_max_duration(cfg, &max_duration) == HF_OK && max_duration == 22);

    EXPECT(hf_duration_pmf(8.0, 1.0, 22, pmf, 22) == HF_OK);
    for (int i = 0; i < 22; ++i) {
        total += pmf[i];
    }
    EXPECT(fabs(total - 1.0) < 1e-12);
    EXPECT(hf_duration_pmf(-1.0, 1.0, 22, pmf, 22) == HF_ERR_DOMAIN);
    EXPECT(hf_duration_pmf(8.0, 1.0, 22, pmf, 3) == HF_ERR_INVALID_ARGUMENT);

    EXPECT(hf_samples_prior_mean(cfg, &truth) == HF_OK);
    EXPECT(hf_samples_count(truth, &n) == HF_OK && n == 1);
    EXPECT(hf_samples_get(truth, 0, "mode_G_recovering", &value) == HF_OK && value > 1.0);
    EXPECT(hf_samples_set(truth, 0, "recovery_G", 0.7) == HF_OK);
    EXPECT(hf_samples_get(truth, 0, "recovery_G", &value) == HF_OK && value == 0.7);
    EXPECT(hf_samples_get(truth, 0, "no_such_param", &value) == HF_ERR_INVALID_ARGUMENT);
    EXPECT(hf_samples_get(truth, 5, "recovery_G", &value) == HF_ERR_INVALID_ARGUMENT);
    EXPECT(hf_samples_set(truth, 0, "recovery_G", 1.5) == HF_ERR_DOMAIN);

    snprintf(path, sizeof path, "%s/truth.csv", dir);
    EXPECT(hf_samples_write(truth, path) == HF_OK);
    EXPECT(hf_samples_load(cfg, path, &loaded) == HF_OK);
    EXPECT(hf_samples_get(loaded, 0, "recovery_G", &value) == HF_OK && value == 0.7);

    EXPECT(hf_dataset_simulate(cfg, truth, NULL, 60, -1, 7, &ds) == HF_ERR_INVALID_ARGUMENT);
    EXPECT(ds == NULL);
    EXPECT(hf_dataset_simulate(cfg, truth, NULL, 60, 3, 7, &ds) == HF_OK);
    EXPECT(hf_dataset_num_days(ds, &n) == HF_OK && n == 60);
    snprintf(path, sizeof path, "%s/data.csv", dir);
    EXPECT(hf_dataset_write(ds, path) == HF_OK);
    EXPECT(hf_dataset_load(cfg, path, &reread) == HF_OK);
    EXPECT(hf_dataset_train_days(reread, &n) == HF_OK && n == 40);

    EXPECT(hf_fit_run(cfg, reread, 11, 1, &fit) == HF_OK);
    EXPECT(hf_fit_write_diagnostics(fit, dir) == HF_OK);
    EXPECT(file_exists(dir, "trace.csv"));
    EXPECT(file_exists(dir, "chains.csv"));
    EXPECT(hf_fit_samples(fit, &posterior) == HF_OK);
    EXPECT(hf_samples_count(posterior, &n) == HF_OK && n > 0);

    EXPECT(hf_forecast_write(cfg, reread, posterior, 3, dir) == HF_OK);
    EXPECT(file_exists(dir, "forecast.csv"));
    EXPECT(hf_evaluate_write(cfg, reread, posterior, 3, dir) == HF_OK);
    EXPECT(file_exists(dir, "mae.csv"));
    EXPECT(file_exists(dir, "coverage.csv"));
    EXPECT(hf_whatif_write(cfg, reread, posterior, 3, dir) == HF_OK);
    EXPECT(file_exists(dir, "difference.csv"));

    EXPECT(hf_forecast_write(cfg, NULL, posterior, 3, dir) == HF_ERR_INVALID_ARGUMENT);

    hf_fit_free(fit);
    hf_samples_free(posterior);
    hf_samples_free(loaded);
    hf_samples_free(truth);
    hf_dataset_free(reread);
    hf_dataset_free(ds);
    hf_config_free(cfg);
    hf_config_free(NULL);

    if (failures == 0) {
        printf("capi: all checks passed\n");
    }
    return failures == 0 ? 0 : 1;
}
