#include "smotecls.h"

#include <cstring>
#include <exception>
#include <memory>
#include <string>

#include "smotecls/dataset.hpp"
#include "smotecls/experiment.hpp"
#include "smotecls/latent_export.hpp"
#include "smotecls/sampler.hpp"
#include "smotecls/simgen.hpp"

namespace {

thread_local std::string g_last_error;

smotecls_status fail(smotecls_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
smotecls_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const smotecls::IoError& e) {
    return fail(SMOTECLS_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(SMOTECLS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::domain_error& e) {
    return fail(SMOTECLS_ERR_NUMERIC, e.what());
  } catch (const std::runtime_error& e) {
    return fail(SMOTECLS_ERR_DATA, e.what());
  } catch (const std::exception& e) {
    return fail(SMOTECLS_ERR_INTERNAL, e.what());
  }
}

smotecls::OversampleConfig to_core_config(const smotecls_augment_config& cfg,
                                          std::string* strategy_name_out) {
  smotecls::OversampleConfig core;
  core.rho = cfg.rho;
  core.k_knn = static_cast<std::size_t>(cfg.k_knn);
  core.k_smote = static_cast<std::size_t>(cfg.k_smote);
  core.k_enn = static_cast<std::size_t>(cfg.k_enn);
  core.filter.easy_retain = cfg.q_easy;
  core.filter.hard_retain = cfg.q_hard;
  core.filter.pooled_retain = cfg.q_pooled;
  core.train.beta = cfg.beta;
  core.train.learning_rate = cfg.learning_rate;
  core.train.epochs = static_cast<std::size_t>(cfg.epochs);
  core.train.batch = static_cast<std::size_t>(cfg.batch);
  core.latent_dim = static_cast<std::size_t>(cfg.latent_dim);
  core.prior_variance = cfg.prior_variance;
  core.forest_trees = static_cast<std::size_t>(cfg.forest_trees);
  core.kmeans_clusters = static_cast<std::size_t>(cfg.kmeans_clusters);
  core.kmeans_minority_threshold = cfg.kmeans_minority_threshold;
  core.ddhs_retain = cfg.ddhs_retain;
  if (cfg.f_eta != nullptr && std::string(cfg.f_eta) == "mlp")
    core.mlp_classifier = true;
  else if (cfg.f_eta != nullptr && std::string(cfg.f_eta) != "forest" &&
           std::string(cfg.f_eta) != "")
    throw std::invalid_argument("f_eta must be 'forest' or 'mlp'");
  if (cfg.prior_preset != nullptr && std::string(cfg.prior_preset) != "")
    core.prior_preset = smotecls::prior_preset_from_name(cfg.prior_preset);
  const std::string name = cfg.strategy != nullptr ? cfg.strategy : "smote";
  if (strategy_name_out != nullptr) *strategy_name_out = name;
  core = smotecls::config_for_strategy(name, core);
  return core;
}

}  // namespace

struct smotecls_dataset {
  smotecls::LabeledDataset data;
  std::vector<smotecls::Provenance> provenance;  // non-empty for simulated data
};

struct smotecls_augment_result {
  smotecls::AugmentResult result;
  smotecls::Standardizer scaler;
  bool standardized = false;
};

struct smotecls_report {
  std::vector<smotecls::StrategyResult> results;
  std::string table;
  std::string csv;
};

extern "C" {

const char* smotecls_version(void) { return "0.1.0"; }

const char* smotecls_last_error(void) { return g_last_error.c_str(); }

smotecls_status smotecls_dataset_load(const char* path, const char* label_column,
                                      const char* positive_token, const char* ignore_column,
                                      smotecls_dataset** out) {
  return guarded([&]() -> smotecls_status {
    if (path == nullptr || label_column == nullptr || positive_token == nullptr || out == nullptr)
      return fail(SMOTECLS_ERR_INVALID_ARGUMENT, "null argument");
    auto ds = std::make_unique<smotecls_dataset>();
    ds->data = smotecls::load_delimited(path, label_column, positive_token,
                                        ignore_column != nullptr ? ignore_column : "");
    *out = ds.release();
    return SMOTECLS_OK;
  });
}

smotecls_status smotecls_dataset_save(const smotecls_dataset* ds, const char* path) {
  return guarded([&]() -> smotecls_status {
    if (ds == nullptr || path == nullptr)
      return fail(SMOTECLS_ERR_INVALID_ARGUMENT, "null argument");
    std::vector<smotecls::ExtraColumn> extras;
    if (!ds->provenance.empty()) {
      smotecls::ExtraColumn col;
      col.name = "provenance";
      for (auto p : ds->provenance) col.values.push_back(smotecls::provenance_name(p));
      extras.push_back(std::move(col));
    }
    smotecls::save_delimited(path, ds->data, extras);
    return SMOTECLS_OK;
  });
}

smotecls_status smotecls_dataset_from_arrays(const double* values, int64_t rows, int64_t cols,
                                             const int32_t* minor_flags, smotecls_dataset** out) {
  return guarded([&]() -> smotecls_status {
    if (values == nullptr || minor_flags == nullptr || out == nullptr || rows < 1 || cols < 1)
      return fail(SMOTECLS_ERR_INVALID_ARGUMENT, "bad array arguments");
    auto ds = std::make_unique<smotecls_dataset>();
    ds->data.features = smotecls::FeatureMatrix(static_cast<std::size_t>(rows),
                                                static_cast<std::size_t>(cols));
    std::memcpy(ds->data.features.values.data(), values,
                static_cast<std::size_t>(rows * cols) * sizeof(double));
    for (int64_t i = 0; i < rows; ++i) {
      const auto label =
          minor_flags[i] != 0 ? smotecls::ClassLabel::Minor : smotecls::ClassLabel::Major;
      ds->data.labels.push_back(label);
      ds->data.label_tokens.push_back(label == smotecls::ClassLabel::Minor ? "minor" : "major");
    }
    ds->data.positive_token = "minor";
    *out = ds.release();
    return SMOTECLS_OK;
  });
}

void smotecls_dataset_free(smotecls_dataset* ds) { delete ds; }

int64_t smotecls_dataset_rows(const smotecls_dataset* ds) {
  return ds == nullptr ? -1 : static_cast<int64_t>(ds->data.size());
}

int64_t smotecls_dataset_cols(const smotecls_dataset* ds) {
  return ds == nullptr ? -1 : static_cast<int64_t>(ds->data.dim());
}

int64_t smotecls_dataset_minor_count(const smotecls_dataset* ds) {
  return ds == nullptr ? -1 : static_cast<int64_t>(ds->data.count(smotecls::ClassLabel::Minor));
}

smotecls_status smotecls_dataset_copy_values(const smotecls_dataset* ds, double* out,
                                             int64_t capacity) {
  return guarded([&]() -> smotecls_status {
    if (ds == nullptr || out == nullptr)
      return fail(SMOTECLS_ERR_INVALID_ARGUMENT, "null argument");
    const auto need = static_cast<int64_t>(ds->data.features.values.size());
    if (capacity < need) return fail(SMOTECLS_ERR_INVALID_ARGUMENT, "buffer too small");
    std::memcpy(out, ds->data.features.values.data(),
                static_cast<std::size_t>(need) * sizeof(double));
    return SMOTECLS_OK;
  });
}

smotecls_status smotecls_dataset_copy_labels(const smotecls_dataset* ds, int32_t* out,
                                             int64_t capacity) {
  return guarded([&]() -> smotecls_status {
    if (ds == nullptr || out == nullptr)
      return fail(SMOTECLS_ERR_INVALID_ARGUMENT, "null argument");
    const auto need = static_cast<int64_t>(ds->data.size());
    if (capacity < need) return fail(SMOTECLS_ERR_INVALID_ARGUMENT, "buffer too small");
    for (int64_t i = 0; i < need; ++i)
      out[i] = ds->data.labels[static_cast<std::size_t>(i)] == smotecls::ClassLabel::Minor ? 1 : 0;
    return SMOTECLS_OK;
  });
}

void smotecls_sim_spec_defaults(smotecls_sim_spec* spec) {
  if (spec == nullptr) return;
  spec->n_large_cluster = 80;
  spec->n_small_cluster = 20;
  spec->n_major = 1500;
  spec->n_noise = 50;
  spec->noise_fresh_draws = 0;
}

namespace {

smotecls::SimSpec to_core_sim_spec(const smotecls_sim_spec& spec) {
  if (spec.n_large_cluster < 0 || spec.n_small_cluster < 0 || spec.n_major < 0 ||
      spec.n_noise < 0)
    throw std::invalid_argument("simulation counts must be non-negative");
  smotecls::SimSpec core;
  core.n_large_cluster = static_cast<std::size_t>(spec.n_large_cluster);
  core.n_small_cluster = static_cast<std::size_t>(spec.n_small_cluster);
  core.n_major = static_cast<std::size_t>(spec.n_major);
  core.n_noise = static_cast<std::size_t>(spec.n_noise);
  core.noise_fresh_draws = spec.noise_fresh_draws != 0;
  return core;
}

}  // namespace

smotecls_status smotecls_simulate(const smotecls_sim_spec* spec, uint64_t seed,
                                  smotecls_dataset** out) {
  return guarded([&]() -> smotecls_status {
    if (spec == nullptr || out == nullptr)
      return fail(SMOTECLS_ERR_INVALID_ARGUMENT, "null argument");
    smotecls::RngStream rng(seed, 0);
    auto ds = std::make_unique<smotecls_dataset>();
    smotecls::SimulatedData sim = smotecls::generate_simulation(to_core_sim_spec(*spec), rng);
    ds->data = std::move(sim.data);
    ds->provenance = std::move(sim.provenance);
    *out = ds.release();
    return SMOTECLS_OK;
  });
}

smotecls_status smotecls_simulate_save(const smotecls_sim_spec* spec, uint64_t seed,
                                       const char* path) {
  smotecls_dataset* ds = nullptr;
  smotecls_status st = smotecls_simulate(spec, seed, &ds);
  if (st != SMOTECLS_OK) return st;
  st = smotecls_dataset_save(ds, path);
  smotecls_dataset_free(ds);
  return st;
}

void smotecls_augment_config_defaults(smotecls_augment_config* cfg) {
  if (cfg == nullptr) return;
  cfg->strategy = "smote_cls";
  cfg->rho = 1.0;
  cfg->k_knn = 5;
  cfg->k_smote = 5;
  cfg->k_enn = 3;
  cfg->q_easy = 0.9;
  cfg->q_hard = 0.6;
  cfg->q_pooled = 0.6;
  cfg->beta = 1.0;
  cfg->learning_rate = 1e-3;
  cfg->epochs = 300;
  cfg->batch = 64;
  cfg->latent_dim = 0;
  cfg->f_eta = "forest";
  cfg->prior_preset = "default";
  cfg->prior_variance = 0.1;
  cfg->forest_trees = 200;
  cfg->kmeans_clusters = 8;
  cfg->kmeans_minority_threshold = 0.5;
  cfg->ddhs_retain = 0.75;
  cfg->standardize = 1;
}

smotecls_status smotecls_augment(const smotecls_dataset* ds, const smotecls_augment_config* cfg,
                                 uint64_t seed, smotecls_augment_result** out) {
  return guarded([&]() -> smotecls_status {
    if (ds == nullptr || cfg == nullptr || out == nullptr)
      return fail(SMOTECLS_ERR_INVALID_ARGUMENT, "null argument");
    std::string strategy_name;
    const smotecls::OversampleConfig core = to_core_config(*cfg, &strategy_name);
    auto res = std::make_unique<smotecls_augment_result>();
    smotecls::RngStream rng(seed, 0);
    if (cfg->standardize != 0) {
      auto [standardized, scaler] = smotecls::standardize(ds->data);
      res->result = smotecls::augment(standardized, core, rng);
      res->scaler = scaler;
      res->standardized = true;
      // bring the augmented rows back to the input units
      res->scaler.inverse_inplace(res->result.augmented.features);
    } else {
      res->result = smotecls::augment(ds->data, core, rng);
    }
    *out = res.release();
    return SMOTECLS_OK;
  });
}

void smotecls_augment_result_free(smotecls_augment_result* res) { delete res; }

int64_t smotecls_augment_result_rows(const smotecls_augment_result* res) {
  return res == nullptr ? -1 : static_cast<int64_t>(res->result.augmented.size());
}

int64_t smotecls_augment_result_synthetic_count(const smotecls_augment_result* res) {
  return res == nullptr ? -1 : static_cast<int64_t>(res->result.n_synthetic);
}

int64_t smotecls_augment_result_dropped_count(const smotecls_augment_result* res) {
  return res == nullptr ? -1 : static_cast<int64_t>(res->result.n_dropped);
}

int32_t smotecls_augment_result_has_latent(const smotecls_augment_result* res) {
  return res != nullptr && res->result.latent.has_value() ? 1 : 0;
}

smotecls_status smotecls_augment_result_save(const smotecls_augment_result* res,
                                             const char* path) {
  return guarded([&]() -> smotecls_status {
    if (res == nullptr || path == nullptr)
      return fail(SMOTECLS_ERR_INVALID_ARGUMENT, "null argument");
    smotecls::ExtraColumn col;
    col.name = "provenance";
    col.values = res->result.provenance;
    smotecls::save_delimited(path, res->result.augmented, {col});
    return SMOTECLS_OK;
  });
}

smotecls_status smotecls_augment_result_take_dataset(const smotecls_augment_result* res,
                                                     smotecls_dataset** out) {
  return guarded([&]() -> smotecls_status {
    if (res == nullptr || out == nullptr)
      return fail(SMOTECLS_ERR_INVALID_ARGUMENT, "null argument");
    auto ds = std::make_unique<smotecls_dataset>();
    ds->data = res->result.augmented;
    *out = ds.release();
    return SMOTECLS_OK;
  });
}

smotecls_status smotecls_augment_result_save_filter_report(const smotecls_augment_result* res,
                                                           const char* path) {
  return guarded([&]() -> smotecls_status {
    if (res == nullptr || path == nullptr)
      return fail(SMOTECLS_ERR_INVALID_ARGUMENT, "null argument");
    if (!res->result.filter.has_value())
      return fail(SMOTECLS_ERR_INVALID_ARGUMENT, "strategy produced no filter report");
    smotecls::write_filter_report_csv(path, *res->result.filter);
    return SMOTECLS_OK;
  });
}

smotecls_status smotecls_augment_result_save_latent_csv(const smotecls_augment_result* res,
                                                        const char* path) {
  return guarded([&]() -> smotecls_status {
    if (res == nullptr || path == nullptr)
      return fail(SMOTECLS_ERR_INVALID_ARGUMENT, "null argument");
    if (!res->result.latent.has_value())
      return fail(SMOTECLS_ERR_INVALID_ARGUMENT, "strategy produced no latent view");
    smotecls::write_latent_csv(path, *res->result.latent);
    return SMOTECLS_OK;
  });
}

smotecls_status smotecls_augment_result_save_latent_svg(const smotecls_augment_result* res,
                                                        const char* path) {
  return guarded([&]() -> smotecls_status {
    if (res == nullptr || path == nullptr)
      return fail(SMOTECLS_ERR_INVALID_ARGUMENT, "null argument");
    if (!res->result.latent.has_value())
      return fail(SMOTECLS_ERR_INVALID_ARGUMENT, "strategy produced no latent view");
    smotecls::write_latent_svg(path, *res->result.latent);
    return SMOTECLS_OK;
  });
}

void smotecls_benchmark_config_defaults(smotecls_benchmark_config* cfg) {
  if (cfg == nullptr) return;
  cfg->strategies = nullptr;
  cfg->n_strategies = 0;
  cfg->repeats = 10;
  cfg->test_fraction = 0.2;
  cfg->eval_forest_trees = 100;
  smotecls_augment_config_defaults(&cfg->augment);
}

smotecls_status smotecls_benchmark(const smotecls_dataset* ds,
                                   const smotecls_benchmark_config* cfg, uint64_t seed,
                                   const char* dataset_name, smotecls_report** out) {
  return guarded([&]() -> smotecls_status {
    if (ds == nullptr || cfg == nullptr || out == nullptr)
      return fail(SMOTECLS_ERR_INVALID_ARGUMENT, "null argument");
    smotecls::ExperimentConfig core;
    for (int32_t i = 0; i < cfg->n_strategies; ++i) {
      if (cfg->strategies == nullptr || cfg->strategies[i] == nullptr)
        return fail(SMOTECLS_ERR_INVALID_ARGUMENT, "null strategy name");
      core.strategies.emplace_back(cfg->strategies[i]);
    }
    core.base = to_core_config(cfg->augment, nullptr);
    core.repeats = static_cast<std::size_t>(cfg->repeats);
    core.test_fraction = cfg->test_fraction;
    core.eval_forest_trees = static_cast<std::size_t>(cfg->eval_forest_trees);
    core.seed = seed;

    auto report = std::make_unique<smotecls_report>();
    report->results = smotecls::run_experiment(ds->data, core);
    const std::string name = dataset_name != nullptr ? dataset_name : "dataset";
    report->table = smotecls::format_report_table(report->results, name);
    report->csv = smotecls::format_report_csv(report->results, name);
    *out = report.release();
    return SMOTECLS_OK;
  });
}

void smotecls_report_free(smotecls_report* report) { delete report; }

const char* smotecls_report_table(const smotecls_report* report) {
  return report == nullptr ? "" : report->table.c_str();
}

const char* smotecls_report_csv(const smotecls_report* report) {
  return report == nullptr ? "" : report->csv.c_str();
}

int32_t smotecls_report_strategy_count(const smotecls_report* report) {
  return report == nullptr ? -1 : static_cast<int32_t>(report->results.size());
}

const char* smotecls_report_strategy_name(const smotecls_report* report, int32_t i) {
  if (report == nullptr || i < 0 || i >= static_cast<int32_t>(report->results.size())) return "";
  return report->results[static_cast<std::size_t>(i)].name.c_str();
}

smotecls_status smotecls_report_metric(const smotecls_report* report, int32_t i,
                                       smotecls_metric metric, double* mean, double* stderr_out) {
  return guarded([&]() -> smotecls_status {
    if (report == nullptr || mean == nullptr || stderr_out == nullptr)
      return fail(SMOTECLS_ERR_INVALID_ARGUMENT, "null argument");
    if (i < 0 || i >= static_cast<int32_t>(report->results.size()))
      return fail(SMOTECLS_ERR_INVALID_ARGUMENT, "strategy index out of range");
    const auto& r = report->results[static_cast<std::size_t>(i)];
    const std::vector<double>* v = nullptr;
    switch (metric) {
      case SMOTECLS_METRIC_AUPRC: v = &r.auprc; break;
      case SMOTECLS_METRIC_AUC: v = &r.auc; break;
      case SMOTECLS_METRIC_F1: v = &r.f1; break;
      case SMOTECLS_METRIC_GMEAN: v = &r.gmean; break;
    }
    if (v == nullptr) return fail(SMOTECLS_ERR_INVALID_ARGUMENT, "unknown metric");
    *mean = r.mean(*v);
    *stderr_out = r.stderr_of(*v);
    return SMOTECLS_OK;
  });
}

}  // extern "C"
