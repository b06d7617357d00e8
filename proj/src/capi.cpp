#include "zicount/zicount.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "csv.hpp"
#include "dataset.hpp"
#include "errors.hpp"
#include "estimation.hpp"
#include "inference.hpp"
#include "simulation.hpp"

namespace {

thread_local std::string g_last_error;

zic_status status_from_code(zic::ErrorCode code) {
  switch (code) {
    case zic::ErrorCode::InvalidArgument: return ZIC_ERR_INVALID_ARGUMENT;
    case zic::ErrorCode::Domain: return ZIC_ERR_DOMAIN;
    case zic::ErrorCode::DimensionMismatch: return ZIC_ERR_DIMENSION;
    case zic::ErrorCode::Parse: return ZIC_ERR_PARSE;
    case zic::ErrorCode::RankDeficient: return ZIC_ERR_RANK_DEFICIENT;
    case zic::ErrorCode::AllZeroResponse: return ZIC_ERR_ALL_ZERO_RESPONSE;
    case zic::ErrorCode::DatasetMismatch: return ZIC_ERR_DATASET_MISMATCH;
    case zic::ErrorCode::Generation: return ZIC_ERR_GENERATION;
    case zic::ErrorCode::Io: return ZIC_ERR_IO;
    case zic::ErrorCode::Internal: return ZIC_ERR_INTERNAL;
  }
  return ZIC_ERR_INTERNAL;
}

template <typename Fn>
zic_status guarded(Fn&& fn) {
  try {
    fn();
    return ZIC_OK;
  } catch (const zic::Error& e) {
    g_last_error = e.what();
    return status_from_code(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return ZIC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ZIC_ERR_INTERNAL;
  }
}

zic_status invalid(const char* msg) {
  g_last_error = msg;
  return ZIC_ERR_INVALID_ARGUMENT;
}

zic::ModelKind to_kind(zic_model model) {
  switch (model) {
    case ZIC_MODEL_POISSON: return zic::ModelKind::Poisson;
    case ZIC_MODEL_NB: return zic::ModelKind::NegBin;
    case ZIC_MODEL_ZIP: return zic::ModelKind::Zip;
    case ZIC_MODEL_ZINB: return zic::ModelKind::Zinb;
    case ZIC_MODEL_MZIP: return zic::ModelKind::Mzip;
    case ZIC_MODEL_MZINB: return zic::ModelKind::Mzinb;
  }
  zic::throw_error(zic::ErrorCode::InvalidArgument, "unknown model enum value");
}

zic_model from_kind(zic::ModelKind kind) {
  switch (kind) {
    case zic::ModelKind::Poisson: return ZIC_MODEL_POISSON;
    case zic::ModelKind::NegBin: return ZIC_MODEL_NB;
    case zic::ModelKind::Zip: return ZIC_MODEL_ZIP;
    case zic::ModelKind::Zinb: return ZIC_MODEL_ZINB;
    case zic::ModelKind::Mzip: return ZIC_MODEL_MZIP;
    case zic::ModelKind::Mzinb: return ZIC_MODEL_MZINB;
  }
  return ZIC_MODEL_POISSON;
}

std::vector<std::string> collect_names(const char* const* names, size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.emplace_back(names[i]);
  return out;
}

zic::FitConfig to_config(const zic_fit_options* options) {
  zic::FitConfig cfg;
  if (options) {
    cfg.max_iterations = options->max_iterations;
    cfg.gradient_tolerance = options->gradient_tolerance;
    cfg.step_tolerance = options->step_tolerance;
    cfg.restart_attempts = options->restart_attempts;
  }
  return cfg;
}

zic::SimulationDesign to_design(const zic_sim_design* design) {
  zic::SimulationDesign out;
  out.generator = to_kind(design->generator);
  out.true_alpha = Eigen::Map<const Eigen::VectorXd>(
      design->true_alpha, static_cast<Eigen::Index>(design->n_alpha));
  out.true_beta = Eigen::Map<const Eigen::VectorXd>(
      design->true_beta, static_cast<Eigen::Index>(design->n_beta));
  if (out.generator == zic::ModelKind::Mzinb) out.true_k = design->true_k;
  out.sample_sizes.assign(design->sample_sizes,
                          design->sample_sizes + design->n_sample_sizes);
  out.replicates = design->replicates;
  out.seed = design->seed;
  for (size_t i = 0; i < design->n_fit_kinds; ++i) {
    out.fit_kinds.push_back(to_kind(design->fit_kinds[i]));
  }
  out.fit_config = to_config(&design->fit_options);
  out.threads = design->threads;
  return out;
}

}  // namespace

struct zic_dataset {
  zic::Dataset data;
};

struct zic_fit {
  zic::FitResult result;
};

struct zic_idr {
  zic::IdrReport report;
};

struct zic_summary {
  zic::SummaryTable table;
};

extern "C" {

const char* zic_version(void) { return "1.0.0"; }

const char* zic_status_name(zic_status status) {
  switch (status) {
    case ZIC_OK: return "ok";
    case ZIC_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case ZIC_ERR_DOMAIN: return "domain";
    case ZIC_ERR_DIMENSION: return "dimension_mismatch";
    case ZIC_ERR_PARSE: return "parse";
    case ZIC_ERR_RANK_DEFICIENT: return "rank_deficient";
    case ZIC_ERR_ALL_ZERO_RESPONSE: return "all_zero_response";
    case ZIC_ERR_DATASET_MISMATCH: return "dataset_mismatch";
    case ZIC_ERR_GENERATION: return "generation";
    case ZIC_ERR_IO: return "io";
    case ZIC_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* zic_model_name(zic_model model) {
  return zic::model_kind_name(to_kind(model));
}

zic_status zic_model_parse(const char* name, zic_model* out) {
  if (!name || !out) return invalid("null argument");
  const auto kind = zic::parse_model_kind(name);
  if (!kind) {
    g_last_error = std::string("unknown model '") + name + "'";
    return ZIC_ERR_INVALID_ARGUMENT;
  }
  *out = from_kind(*kind);
  return ZIC_OK;
}

const char* zic_last_error(void) { return g_last_error.c_str(); }

zic_status zic_dataset_from_csv(const char* path, const char* response,
                                const char* const* count_columns,
                                size_t n_count_columns,
                                const char* const* zero_columns,
                                size_t n_zero_columns, int intercept,
                                zic_dataset** out) {
  if (!path || !response || !out || (n_count_columns && !count_columns) ||
      (n_zero_columns && !zero_columns)) {
    return invalid("null argument");
  }
  return guarded([&] {
    auto data = zic::load_dataset_csv(
        path, response, collect_names(count_columns, n_count_columns),
        collect_names(zero_columns, n_zero_columns), intercept != 0);
    *out = new zic_dataset{std::move(data)};
  });
}

zic_status zic_dataset_from_arrays(const int64_t* y, size_t n, const double* x,
                                   size_t p, const char* const* x_names,
                                   const double* z, size_t q,
                                   const char* const* z_names,
                                   zic_dataset** out) {
  if (!y || !x || !x_names || !out || (q && (!z || !z_names))) {
    return invalid("null argument");
  }
  return guarded([&] {
    std::vector<std::int64_t> yv(y, y + n);
    Eigen::MatrixXd xm(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < p; ++j) {
        xm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            x[i * p + j];
      }
    }
    Eigen::MatrixXd zm(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(q));
    for (size_t i = 0; i < n && q > 0; ++i) {
      for (size_t j = 0; j < q; ++j) {
        zm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            z[i * q + j];
      }
    }
    *out = new zic_dataset{zic::Dataset(std::move(yv), std::move(xm),
                                        collect_names(x_names, p), std::move(zm),
                                        q ? collect_names(z_names, q)
                                          : std::vector<std::string>{})};
  });
}

zic_status zic_dataset_write_csv(const zic_dataset* data, const char* path) {
  if (!data || !path) return invalid("null argument");
  return guarded([&] { zic::write_dataset_csv(data->data, path); });
}

size_t zic_dataset_rows(const zic_dataset* data) {
  return data ? static_cast<size_t>(data->data.n()) : 0;
}

size_t zic_dataset_count_columns(const zic_dataset* data) {
  return data ? static_cast<size_t>(data->data.p()) : 0;
}

size_t zic_dataset_zero_columns(const zic_dataset* data) {
  return data ? static_cast<size_t>(data->data.q()) : 0;
}

const char* zic_dataset_count_column_name(const zic_dataset* data, size_t j) {
  if (!data || j >= data->data.x_names().size()) return nullptr;
  return data->data.x_names()[j].c_str();
}

const char* zic_dataset_zero_column_name(const zic_dataset* data, size_t j) {
  if (!data || j >= data->data.z_names().size()) return nullptr;
  return data->data.z_names()[j].c_str();
}

void zic_dataset_free(zic_dataset* data) { delete data; }

void zic_fit_options_init(zic_fit_options* options) {
  if (!options) return;
  const zic::FitConfig defaults;
  options->max_iterations = defaults.max_iterations;
  options->gradient_tolerance = defaults.gradient_tolerance;
  options->step_tolerance = defaults.step_tolerance;
  options->restart_attempts = defaults.restart_attempts;
}

zic_status zic_fit_model(const zic_dataset* data, zic_model model,
                         const zic_fit_options* options, zic_fit** out) {
  if (!data || !out) return invalid("null argument");
  return guarded([&] {
    *out = new zic_fit{zic::fit(to_kind(model), data->data, to_config(options))};
  });
}

size_t zic_fit_num_params(const zic_fit* fit) {
  return fit ? static_cast<size_t>(fit->result.n_free_params) : 0;
}

const char* zic_fit_param_name(const zic_fit* fit, size_t j) {
  if (!fit || j >= fit->result.param_names.size()) return nullptr;
  return fit->result.param_names[j].c_str();
}

double zic_fit_estimate(const zic_fit* fit, size_t j) {
  return fit->result.natural_estimates(static_cast<Eigen::Index>(j));
}

double zic_fit_std_error(const zic_fit* fit, size_t j) {
  return fit->result.std_errors(static_cast<Eigen::Index>(j));
}

double zic_fit_z_stat(const zic_fit* fit, size_t j) {
  return fit->result.z_stats(static_cast<Eigen::Index>(j));
}

int zic_fit_significant_at_05(const zic_fit* fit, size_t j) {
  return fit->result.significant_at_05[j] ? 1 : 0;
}

double zic_fit_loglik(const zic_fit* fit) { return fit->result.loglik; }
double zic_fit_minus2ll(const zic_fit* fit) { return fit->result.minus2ll; }
double zic_fit_aic(const zic_fit* fit) { return fit->result.aic; }
int zic_fit_converged(const zic_fit* fit) { return fit->result.converged ? 1 : 0; }
int zic_fit_iterations(const zic_fit* fit) { return fit->result.iterations; }

int zic_fit_condition_warning(const zic_fit* fit) {
  return fit->result.condition_warning ? 1 : 0;
}

zic_model zic_fit_model_kind(const zic_fit* fit) {
  return from_kind(fit->result.kind);
}

void zic_fit_free(zic_fit* fit) { delete fit; }

zic_status zic_compare(const zic_fit* const* fits, size_t n_fits,
                       size_t* ranking) {
  if (!fits || !ranking) return invalid("null argument");
  return guarded([&] {
    std::vector<zic::FitResult> results;
    results.reserve(n_fits);
    for (size_t i = 0; i < n_fits; ++i) results.push_back(fits[i]->result);
    const auto rows = zic::compare(results);
    for (size_t r = 0; r < rows.size(); ++r) {
      for (size_t i = 0; i < n_fits; ++i) {
        if (fits[i]->result.kind == rows[r].kind &&
            fits[i]->result.aic == rows[r].aic) {
          ranking[r] = i;
          break;
        }
      }
    }
  });
}

zic_status zic_predict_marginal_mean(const zic_fit* fit,
                                     const zic_dataset* data_for_layout,
                                     const double* x, const double* z,
                                     size_t n_rows, double* out) {
  if (!fit || !x || !out) return invalid("null argument");
  (void)data_for_layout;
  return guarded([&] {
    const auto p = fit->result.estimates.beta.size();
    const auto q = fit->result.estimates.alpha.size();
    if (q > 0 && !z) {
      zic::throw_error(zic::ErrorCode::InvalidArgument,
                       "zero-part rows required for zero-inflated models");
    }
    Eigen::MatrixXd xm(static_cast<Eigen::Index>(n_rows), p);
    for (size_t i = 0; i < n_rows; ++i) {
      for (Eigen::Index j = 0; j < p; ++j) {
        xm(static_cast<Eigen::Index>(i), j) = x[i * static_cast<size_t>(p) +
                                                static_cast<size_t>(j)];
      }
    }
    Eigen::MatrixXd zm(static_cast<Eigen::Index>(n_rows), q);
    for (size_t i = 0; i < n_rows && q > 0; ++i) {
      for (Eigen::Index j = 0; j < q; ++j) {
        zm(static_cast<Eigen::Index>(i), j) = z[i * static_cast<size_t>(q) +
                                                static_cast<size_t>(j)];
      }
    }
    const Eigen::VectorXd mu = zic::predict_marginal_mean(fit->result, xm, zm);
    for (size_t i = 0; i < n_rows; ++i) out[i] = mu(static_cast<Eigen::Index>(i));
  });
}

zic_status zic_idr_compute(const zic_fit* fit, const zic_dataset* data,
                           const char* covariate, zic_idr** out) {
  if (!fit || !data || !covariate || !out) return invalid("null argument");
  return guarded([&] {
    const auto& names = data->data.x_names();
    const auto it = std::find(names.begin(), names.end(), covariate);
    if (it == names.end()) {
      zic::throw_error(zic::ErrorCode::InvalidArgument,
                       std::string("covariate '") + covariate +
                           "' not in the count design");
    }
    const auto index = static_cast<Eigen::Index>(it - names.begin());
    *out = new zic_idr{zic::idr(fit->result, data->data, index)};
  });
}

int zic_idr_constant(const zic_idr* idr) { return idr->report.constant ? 1 : 0; }

double zic_idr_value(const zic_idr* idr) { return idr->report.idr; }

zic_status zic_idr_ci(const zic_idr* idr, double* low, double* high) {
  if (!idr || !low || !high) return invalid("null argument");
  if (!idr->report.ci_95) {
    g_last_error = "no confidence interval for profile-dependent IDRs";
    return ZIC_ERR_INVALID_ARGUMENT;
  }
  *low = idr->report.ci_95->first;
  *high = idr->report.ci_95->second;
  return ZIC_OK;
}

size_t zic_idr_num_profiles(const zic_idr* idr) {
  return idr ? idr->report.profiles.size() : 0;
}

zic_status zic_idr_profile(const zic_idr* idr, size_t i, double* zero_linpred,
                           double* value) {
  if (!idr || !zero_linpred || !value) return invalid("null argument");
  if (i >= idr->report.profiles.size()) return invalid("profile index out of range");
  *zero_linpred = idr->report.profiles[i].first;
  *value = idr->report.profiles[i].second;
  return ZIC_OK;
}

void zic_idr_free(zic_idr* idr) { delete idr; }

void zic_sim_design_init(zic_sim_design* design) {
  if (!design) return;
  std::memset(design, 0, sizeof(*design));
  design->generator = ZIC_MODEL_MZIP;
  design->replicates = 1;
  design->threads = 1;
  zic_fit_options_init(&design->fit_options);
}

zic_status zic_simulate(const zic_sim_design* design, zic_summary** out) {
  if (!design || !out || !design->true_alpha || !design->true_beta ||
      !design->sample_sizes || !design->fit_kinds) {
    return invalid("null argument");
  }
  return guarded([&] {
    *out = new zic_summary{zic::run_study(to_design(design))};
  });
}

zic_status zic_generate_dataset(const zic_sim_design* design, int n,
                                uint64_t stream, zic_dataset** out) {
  if (!design || !out || !design->true_alpha || !design->true_beta) {
    return invalid("null argument");
  }
  return guarded([&] {
    zic::RngStream rng(design->seed, stream);
    zic::ParameterVector truth;
    truth.alpha = Eigen::Map<const Eigen::VectorXd>(
        design->true_alpha, static_cast<Eigen::Index>(design->n_alpha));
    truth.beta = Eigen::Map<const Eigen::VectorXd>(
        design->true_beta, static_cast<Eigen::Index>(design->n_beta));
    const auto generator = to_kind(design->generator);
    if (generator == zic::ModelKind::Mzinb) truth.log_k = std::log(design->true_k);
    const auto [x1, x2] = zic::generate_covariates(rng, n);
    Eigen::MatrixXd m(n, 3);
    m.col(0).setOnes();
    m.col(1) = x1;
    m.col(2) = x2;
    const auto y = zic::generate_response(rng, generator, truth, m, m);
    const std::vector<std::string> names = {"(Intercept)", "x1", "x2"};
    *out = new zic_dataset{zic::Dataset(y, m, names, m, names)};
  });
}

size_t zic_summary_num_cells(const zic_summary* summary) {
  return summary ? summary->table.cells.size() : 0;
}

zic_status zic_summary_cell_at(const zic_summary* summary, size_t i,
                               zic_summary_cell* out) {
  if (!summary || !out) return invalid("null argument");
  if (i >= summary->table.cells.size()) return invalid("cell index out of range");
  const auto& cell = summary->table.cells[i];
  out->fit_kind = from_kind(cell.fit_kind);
  out->sample_size = cell.sample_size;
  out->parameter = cell.parameter.c_str();
  out->true_value = cell.true_value;
  out->mean_estimate = cell.mean_estimate;
  out->mean_model_se = cell.mean_model_se;
  out->empirical_se = cell.empirical_se;
  out->bias = cell.bias;
  out->relative_bias = cell.relative_bias;
  out->mse = cell.mse;
  out->replicates_converged = cell.replicates_converged;
  out->replicates_failed = cell.replicates_failed;
  return ZIC_OK;
}

void zic_summary_free(zic_summary* summary) { delete summary; }

}  // extern "C"
