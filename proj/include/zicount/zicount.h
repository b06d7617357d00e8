/* zicount — count regression with zero inflation and overdispersion.
 *
 * C API for the shared library. All functions returning zic_status set a
 * thread-local error message readable via zic_last_error() on failure.
 * Objects returned through out-parameters are owned by the caller and must be
 * released with the matching *_free function.
 */
#ifndef ZICOUNT_H
#define ZICOUNT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum zic_status {
  ZIC_OK = 0,
  ZIC_ERR_INVALID_ARGUMENT = 1,
  ZIC_ERR_DOMAIN = 2,
  ZIC_ERR_DIMENSION = 3,
  ZIC_ERR_PARSE = 4,
  ZIC_ERR_RANK_DEFICIENT = 5,
  ZIC_ERR_ALL_ZERO_RESPONSE = 6,
  ZIC_ERR_DATASET_MISMATCH = 7,
  ZIC_ERR_GENERATION = 8,
  ZIC_ERR_IO = 9,
  ZIC_ERR_INTERNAL = 10
} zic_status;

typedef enum zic_model {
  ZIC_MODEL_POISSON = 0,
  ZIC_MODEL_NB = 1,
  ZIC_MODEL_ZIP = 2,
  ZIC_MODEL_ZINB = 3,
  ZIC_MODEL_MZIP = 4,
  ZIC_MODEL_MZINB = 5
} zic_model;

typedef struct zic_dataset zic_dataset;
typedef struct zic_fit zic_fit;
typedef struct zic_idr zic_idr;
typedef struct zic_summary zic_summary;

const char* zic_version(void);
const char* zic_status_name(zic_status status);
const char* zic_model_name(zic_model model);
zic_status zic_model_parse(const char* name, zic_model* out);

/* Message for the most recent failing call on this thread. */
const char* zic_last_error(void);

/* ---- datasets ---------------------------------------------------------- */

/* Loads a CSV file (header row, comma separated). count_columns/zero_columns
 * name the covariates of the two model parts; an empty zero part means no
 * zero-inflation design. Categorical columns expand to reference-coded
 * indicators. intercept != 0 prepends "(Intercept)" to each part. */
zic_status zic_dataset_from_csv(const char* path, const char* response,
                                const char* const* count_columns,
                                size_t n_count_columns,
                                const char* const* zero_columns,
                                size_t n_zero_columns, int intercept,
                                zic_dataset** out);

/* Builds a dataset from row-major arrays. x is n*p, z is n*q (may be NULL
 * when q == 0). */
zic_status zic_dataset_from_arrays(const int64_t* y, size_t n, const double* x,
                                   size_t p, const char* const* x_names,
                                   const double* z, size_t q,
                                   const char* const* z_names,
                                   zic_dataset** out);

zic_status zic_dataset_write_csv(const zic_dataset* data, const char* path);

size_t zic_dataset_rows(const zic_dataset* data);
size_t zic_dataset_count_columns(const zic_dataset* data);
size_t zic_dataset_zero_columns(const zic_dataset* data);
const char* zic_dataset_count_column_name(const zic_dataset* data, size_t j);
const char* zic_dataset_zero_column_name(const zic_dataset* data, size_t j);
void zic_dataset_free(zic_dataset* data);

/* ---- fitting ----------------------------------------------------------- */

typedef struct zic_fit_options {
  int max_iterations;        /* default 500 */
  double gradient_tolerance; /* default 1e-6 (max-norm of the score) */
  double step_tolerance;     /* default 1e-10 (relative step) */
  int restart_attempts;      /* default 3 */
} zic_fit_options;

void zic_fit_options_init(zic_fit_options* options);

zic_status zic_fit_model(const zic_dataset* data, zic_model model,
                         const zic_fit_options* options, zic_fit** out);

size_t zic_fit_num_params(const zic_fit* fit);
/* Parameter names carry a "zero:" or "count:" prefix; "k" is last. */
const char* zic_fit_param_name(const zic_fit* fit, size_t j);
double zic_fit_estimate(const zic_fit* fit, size_t j);
double zic_fit_std_error(const zic_fit* fit, size_t j);
double zic_fit_z_stat(const zic_fit* fit, size_t j);
int zic_fit_significant_at_05(const zic_fit* fit, size_t j);
double zic_fit_loglik(const zic_fit* fit);
double zic_fit_minus2ll(const zic_fit* fit);
double zic_fit_aic(const zic_fit* fit);
int zic_fit_converged(const zic_fit* fit);
int zic_fit_iterations(const zic_fit* fit);
int zic_fit_condition_warning(const zic_fit* fit);
zic_model zic_fit_model_kind(const zic_fit* fit);
void zic_fit_free(zic_fit* fit);

/* Ranks fits of the same dataset by ascending AIC (ties: fewer parameters,
 * then model order). ranking[i] receives the index of the i-th best fit. */
zic_status zic_compare(const zic_fit* const* fits, size_t n_fits,
                       size_t* ranking);

/* Marginal mean predictions for n_rows new rows (row-major x, and z for
 * zero-inflated models; z may be NULL otherwise). */
zic_status zic_predict_marginal_mean(const zic_fit* fit,
                                     const zic_dataset* data_for_layout,
                                     const double* x, const double* z,
                                     size_t n_rows, double* out);

/* ---- incidence density ratios ------------------------------------------ */

/* covariate names a count-part design column (intercept not allowed). The
 * dataset supplies the evaluation profiles for ZIP/ZINB. */
zic_status zic_idr_compute(const zic_fit* fit, const zic_dataset* data,
                           const char* covariate, zic_idr** out);

int zic_idr_constant(const zic_idr* idr);
double zic_idr_value(const zic_idr* idr);     /* constant reports only */
zic_status zic_idr_ci(const zic_idr* idr, double* low, double* high);
size_t zic_idr_num_profiles(const zic_idr* idr);
zic_status zic_idr_profile(const zic_idr* idr, size_t i, double* zero_linpred,
                           double* value);
void zic_idr_free(zic_idr* idr);

/* ---- simulation studies ------------------------------------------------ */

typedef struct zic_sim_design {
  zic_model generator; /* ZIC_MODEL_MZIP or ZIC_MODEL_MZINB */
  const double* true_alpha;
  size_t n_alpha;
  const double* true_beta;
  size_t n_beta;
  double true_k; /* read iff generator is MZINB */
  const int* sample_sizes;
  size_t n_sample_sizes;
  int replicates;
  uint64_t seed;
  const zic_model* fit_kinds;
  size_t n_fit_kinds;
  int threads;                    /* worker threads, >= 1 */
  zic_fit_options fit_options;
} zic_sim_design;

void zic_sim_design_init(zic_sim_design* design);

zic_status zic_simulate(const zic_sim_design* design, zic_summary** out);

/* Draws one dataset from the design's generator (covariates x1~Bernoulli(0.5),
 * x2~standard lognormal, X=Z=[1,x1,x2]) using (seed, stream). */
zic_status zic_generate_dataset(const zic_sim_design* design, int n,
                                uint64_t stream, zic_dataset** out);

typedef struct zic_summary_cell {
  zic_model fit_kind;
  int sample_size;
  const char* parameter; /* owned by the summary object */
  double true_value;     /* NaN when the parameter has no true value */
  double mean_estimate;
  double mean_model_se;
  double empirical_se;
  double bias;
  double relative_bias;
  double mse;
  int replicates_converged;
  int replicates_failed;
} zic_summary_cell;

size_t zic_summary_num_cells(const zic_summary* summary);
zic_status zic_summary_cell_at(const zic_summary* summary, size_t i,
                               zic_summary_cell* out);
void zic_summary_free(zic_summary* summary);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ZICOUNT_H */
