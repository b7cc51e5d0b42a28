/* C interface to the smotecls library: difficulty-aware relabeling, a
 * GMM-prior conditional VAE, density filtering, SMOTE-family oversampling,
 * and a repeated-split benchmark harness.
 *
 * All functions return smotecls_status; every out-parameter handle must be
 * released with the matching _free function. smotecls_last_error() describes
 * the most recent failure on the calling thread.
 */
#ifndef SMOTECLS_H
#define SMOTECLS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SMOTECLS_API __declspec(dllexport)
#else
#define SMOTECLS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum smotecls_status {
  SMOTECLS_OK = 0,
  SMOTECLS_ERR_INVALID_ARGUMENT = 1,
  SMOTECLS_ERR_IO = 2,
  SMOTECLS_ERR_DATA = 3,
  SMOTECLS_ERR_NUMERIC = 4,
  SMOTECLS_ERR_INTERNAL = 5
} smotecls_status;

SMOTECLS_API const char* smotecls_version(void);
/* Message for the last failing call on this thread; empty string if none. */
SMOTECLS_API const char* smotecls_last_error(void);

/* ---------- datasets ---------- */

typedef struct smotecls_dataset smotecls_dataset;

/* Delimited text with a header row (comma or tab, auto-detected). Rows whose
 * label cell equals positive_token become the minor class. ignore_column may
 * name one non-feature column to drop (e.g. "provenance"); pass NULL or ""
 * to keep every column. */
SMOTECLS_API smotecls_status smotecls_dataset_load(const char* path, const char* label_column,
                                                   const char* positive_token,
                                                   const char* ignore_column,
                                                   smotecls_dataset** out);
SMOTECLS_API smotecls_status smotecls_dataset_save(const smotecls_dataset* ds, const char* path);
SMOTECLS_API smotecls_status smotecls_dataset_from_arrays(const double* values, int64_t rows,
                                                          int64_t cols, const int32_t* minor_flags,
                                                          smotecls_dataset** out);
SMOTECLS_API void smotecls_dataset_free(smotecls_dataset* ds);

SMOTECLS_API int64_t smotecls_dataset_rows(const smotecls_dataset* ds);
SMOTECLS_API int64_t smotecls_dataset_cols(const smotecls_dataset* ds);
SMOTECLS_API int64_t smotecls_dataset_minor_count(const smotecls_dataset* ds);
/* Buffers must hold rows*cols doubles / rows int32s respectively. */
SMOTECLS_API smotecls_status smotecls_dataset_copy_values(const smotecls_dataset* ds, double* out,
                                                          int64_t capacity);
SMOTECLS_API smotecls_status smotecls_dataset_copy_labels(const smotecls_dataset* ds, int32_t* out,
                                                          int64_t capacity);

/* ---------- simulation ---------- */

typedef struct smotecls_sim_spec {
  int64_t n_large_cluster; /* minority draws around (-0.3, 0) */
  int64_t n_small_cluster; /* minority draws around (0.3, 0) */
  int64_t n_major;         /* uniform majority on [-1, 1]^2 */
  int64_t n_noise;         /* majority rows relabeled minor */
  int32_t noise_fresh_draws; /* nonzero: draw new points instead of relabeling */
} smotecls_sim_spec;

SMOTECLS_API void smotecls_sim_spec_defaults(smotecls_sim_spec* spec);
/* Writes the dataset plus a provenance column (G1|G2|major|noise) on save. */
SMOTECLS_API smotecls_status smotecls_simulate(const smotecls_sim_spec* spec, uint64_t seed,
                                               smotecls_dataset** out);
SMOTECLS_API smotecls_status smotecls_simulate_save(const smotecls_sim_spec* spec, uint64_t seed,
                                                    const char* path);

/* ---------- augmentation ---------- */

typedef struct smotecls_augment_config {
  const char* strategy; /* smote, bsmote, smote_enn, kmsmote, smote_cls,
                           smote_cls_no_dis, smote_cls_no_seg, smote_cls_no_af,
                           dfbs_filter_smote, ddhs_filter_smote,
                           latent_smote_decode, cvae_generate */
  double rho;
  int32_t k_knn;
  int32_t k_smote;
  int32_t k_enn;
  double q_easy;   /* retained fraction of the easy-minor group */
  double q_hard;   /* retained fraction of the hard-minor group */
  double q_pooled; /* retained fraction under the pooled (non-adaptive) filter */
  double beta;
  double learning_rate;
  int32_t epochs;
  int32_t batch;
  int32_t latent_dim;   /* 0: auto (4 when cols > 90, else 2) */
  const char* f_eta;    /* "forest" or "mlp" */
  const char* prior_preset; /* default, wide, axes, merged */
  double prior_variance;
  int32_t forest_trees;
  int32_t kmeans_clusters;
  double kmeans_minority_threshold;
  double ddhs_retain;
  int32_t standardize; /* nonzero: standardize internally, invert on output */
} smotecls_augment_config;

SMOTECLS_API void smotecls_augment_config_defaults(smotecls_augment_config* cfg);

typedef struct smotecls_augment_result smotecls_augment_result;

SMOTECLS_API smotecls_status smotecls_augment(const smotecls_dataset* ds,
                                              const smotecls_augment_config* cfg, uint64_t seed,
                                              smotecls_augment_result** out);
SMOTECLS_API void smotecls_augment_result_free(smotecls_augment_result* res);

SMOTECLS_API int64_t smotecls_augment_result_rows(const smotecls_augment_result* res);
SMOTECLS_API int64_t smotecls_augment_result_synthetic_count(const smotecls_augment_result* res);
SMOTECLS_API int64_t smotecls_augment_result_dropped_count(const smotecls_augment_result* res);
/* 1 when the strategy produced latent-space artifacts (smote_cls family). */
SMOTECLS_API int32_t smotecls_augment_result_has_latent(const smotecls_augment_result* res);

/* Augmented dataset with a provenance column (original|synthetic). */
SMOTECLS_API smotecls_status smotecls_augment_result_save(const smotecls_augment_result* res,
                                                          const char* path);
SMOTECLS_API smotecls_status smotecls_augment_result_take_dataset(
    const smotecls_augment_result* res, smotecls_dataset** out);
SMOTECLS_API smotecls_status smotecls_augment_result_save_filter_report(
    const smotecls_augment_result* res, const char* path);
SMOTECLS_API smotecls_status smotecls_augment_result_save_latent_csv(
    const smotecls_augment_result* res, const char* path);
SMOTECLS_API smotecls_status smotecls_augment_result_save_latent_svg(
    const smotecls_augment_result* res, const char* path);

/* ---------- benchmarking ---------- */

typedef struct smotecls_benchmark_config {
  const char* const* strategies; /* names as in smotecls_augment_config */
  int32_t n_strategies;
  int32_t repeats;
  double test_fraction;
  int32_t eval_forest_trees;
  smotecls_augment_config augment; /* template; its strategy field is ignored */
} smotecls_benchmark_config;

SMOTECLS_API void smotecls_benchmark_config_defaults(smotecls_benchmark_config* cfg);

typedef struct smotecls_report smotecls_report;

SMOTECLS_API smotecls_status smotecls_benchmark(const smotecls_dataset* ds,
                                                const smotecls_benchmark_config* cfg,
                                                uint64_t seed, const char* dataset_name,
                                                smotecls_report** out);
SMOTECLS_API void smotecls_report_free(smotecls_report* report);

/* Stable aligned text table / CSV; pointers live as long as the report. */
SMOTECLS_API const char* smotecls_report_table(const smotecls_report* report);
SMOTECLS_API const char* smotecls_report_csv(const smotecls_report* report);

typedef enum smotecls_metric {
  SMOTECLS_METRIC_AUPRC = 0,
  SMOTECLS_METRIC_AUC = 1,
  SMOTECLS_METRIC_F1 = 2,
  SMOTECLS_METRIC_GMEAN = 3
} smotecls_metric;

SMOTECLS_API int32_t smotecls_report_strategy_count(const smotecls_report* report);
SMOTECLS_API const char* smotecls_report_strategy_name(const smotecls_report* report, int32_t i);
SMOTECLS_API smotecls_status smotecls_report_metric(const smotecls_report* report, int32_t i,
                                                    smotecls_metric metric, double* mean,
                                                    double* stderr_out);

#ifdef __cplusplus
}
#endif

#endif /* SMOTECLS_H */
