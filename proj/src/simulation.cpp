#include "simulation.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "errors.hpp"
#include "numerics.hpp"

namespace zic {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void validate_design(const SimulationDesign& design) {
  if (design.generator != ModelKind::Mzip && design.generator != ModelKind::Mzinb) {
    throw_error(ErrorCode::InvalidArgument,
                "simulation generator must be mzip or mzinb");
  }
  if (design.generator == ModelKind::Mzinb) {
    if (!design.true_k || !(*design.true_k > 0.0)) {
      throw_error(ErrorCode::InvalidArgument,
                  "mzinb generator requires a positive true k");
    }
  } else if (design.true_k) {
    throw_error(ErrorCode::InvalidArgument, "true k is only valid for mzinb");
  }
  if (design.replicates < 1) {
    throw_error(ErrorCode::InvalidArgument, "replicates must be >= 1");
  }
  if (design.sample_sizes.empty()) {
    throw_error(ErrorCode::InvalidArgument, "no sample sizes given");
  }
  for (int n : design.sample_sizes) {
    if (n < 1) throw_error(ErrorCode::InvalidArgument, "sample sizes must be >= 1");
  }
  if (design.fit_kinds.empty()) {
    throw_error(ErrorCode::InvalidArgument, "no fit kinds given");
  }
  if (design.true_alpha.size() != 3 || design.true_beta.size() != 3) {
    throw_error(ErrorCode::InvalidArgument,
                "covariate recipe is [1, x1, x2]: true alpha and beta need 3 entries");
  }
  if (design.threads < 1) {
    throw_error(ErrorCode::InvalidArgument, "threads must be >= 1");
  }
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> generate_covariates(RngStream& rng,
                                                                int n) {
  if (n < 1) throw_error(ErrorCode::InvalidArgument, "n must be >= 1");
  Eigen::VectorXd x1(n), x2(n);
  for (int i = 0; i < n; ++i) x1(i) = static_cast<double>(sample_bernoulli(rng, 0.5));
  for (int i = 0; i < n; ++i) x2(i) = sample_lognormal_standard(rng);
  return {x1, x2};
}

std::vector<std::int64_t> generate_response(RngStream& rng, ModelKind generator,
                                            const ParameterVector& params,
                                            const Eigen::MatrixXd& x,
                                            const Eigen::MatrixXd& z) {
  if (generator != ModelKind::Mzip && generator != ModelKind::Mzinb) {
    throw_error(ErrorCode::InvalidArgument, "generator must be mzip or mzinb");
  }
  if (x.rows() != z.rows() || x.cols() != params.beta.size() ||
      z.cols() != params.alpha.size()) {
    throw_error(ErrorCode::DimensionMismatch,
                "generator designs do not match parameter lengths");
  }
  const bool dispersed = generator == ModelKind::Mzinb;
  const double k = dispersed ? params.k() : 0.0;

  const Eigen::VectorXd xb = x * params.beta;
  const Eigen::VectorXd eta = z * params.alpha;
  std::vector<std::int64_t> y(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double pi = expit(eta(i));
    const double lambda = std::exp(xb(i) + softplus(eta(i)));
    if (!std::isfinite(lambda)) {
      throw_error(ErrorCode::Generation,
                  "non-finite conditional mean at row " + std::to_string(i + 1));
    }
    if (sample_bernoulli(rng, pi)) {
      y[static_cast<std::size_t>(i)] = 0;
    } else if (dispersed) {
      y[static_cast<std::size_t>(i)] = sample_nb(rng, lambda, k);
    } else {
      y[static_cast<std::size_t>(i)] = sample_poisson(rng, lambda);
    }
  }
  return y;
}

std::vector<std::string> design_parameter_names(ModelKind fit_kind,
                                                Eigen::Index q, Eigen::Index p) {
  std::vector<std::string> names;
  if (has_zero_part(fit_kind)) {
    for (Eigen::Index j = 0; j < q; ++j) names.push_back("alpha" + std::to_string(j));
  }
  for (Eigen::Index j = 0; j < p; ++j) names.push_back("beta" + std::to_string(j));
  if (has_dispersion(fit_kind)) names.push_back("k");
  return names;
}

namespace {

struct ReplicateOutcome {
  // one entry per fit kind: estimates and SEs in pack order, or empty if the
  // fit failed / did not converge
  std::vector<Eigen::VectorXd> estimates;
  std::vector<Eigen::VectorXd> std_errors;
  std::vector<bool> converged;
};

ReplicateOutcome run_replicate(const SimulationDesign& design, int n,
                               std::uint64_t replicate_index) {
  ReplicateOutcome outcome;
  const std::size_t n_kinds = design.fit_kinds.size();
  outcome.estimates.resize(n_kinds);
  outcome.std_errors.resize(n_kinds);
  outcome.converged.assign(n_kinds, false);

  RngStream rng(design.seed, replicate_index);
  const auto [x1, x2] = generate_covariates(rng, n);
  Eigen::MatrixXd design_matrix(n, 3);
  design_matrix.col(0).setOnes();
  design_matrix.col(1) = x1;
  design_matrix.col(2) = x2;

  ParameterVector truth;
  truth.alpha = design.true_alpha;
  truth.beta = design.true_beta;
  if (design.true_k) truth.log_k = std::log(*design.true_k);

  const auto y =
      generate_response(rng, design.generator, truth, design_matrix, design_matrix);

  const std::vector<std::string> names = {"(Intercept)", "x1", "x2"};
  const Dataset data(y, design_matrix, names, design_matrix, names);

  for (std::size_t kidx = 0; kidx < n_kinds; ++kidx) {
    const ModelKind kind = design.fit_kinds[kidx];
    try {
      FitResult res = fit(kind, data, design.fit_config);
      if (res.converged) {
        outcome.converged[kidx] = true;
        outcome.estimates[kidx] = res.natural_estimates;
        outcome.std_errors[kidx] = res.std_errors;
      }
    } catch (const Error&) {
      // counted as a failed replicate for this kind
    }
  }
  return outcome;
}

// True values aligned with the fit kind's parameter vector; NaN marks
// parameters the generator does not define.
Eigen::VectorXd truth_for_kind(const SimulationDesign& design, ModelKind kind) {
  const Eigen::Index q = design.true_alpha.size();
  const Eigen::Index p = design.true_beta.size();
  Eigen::Index dim = p;
  if (has_zero_part(kind)) dim += q;
  if (has_dispersion(kind)) dim += 1;
  Eigen::VectorXd truth(dim);
  Eigen::Index at = 0;
  if (has_zero_part(kind)) {
    truth.segment(at, q) = design.true_alpha;
    at += q;
  }
  truth.segment(at, p) = design.true_beta;
  at += p;
  if (has_dispersion(kind)) {
    truth(at) = (design.generator == ModelKind::Mzinb) ? *design.true_k : kNan;
  }
  return truth;
}

}  // namespace

SummaryTable run_study(const SimulationDesign& design) {
  validate_design(design);

  const int n_sizes = static_cast<int>(design.sample_sizes.size());
  const int reps = design.replicates;
  const int total_tasks = n_sizes * reps;

  // tasks are (size index, replicate); outcomes land in preassigned slots so
  // aggregation order never depends on the worker schedule
  std::vector<ReplicateOutcome> outcomes(static_cast<std::size_t>(total_tasks));
  std::atomic<int> next_task{0};
  auto worker = [&]() {
    for (;;) {
      const int task = next_task.fetch_add(1);
      if (task >= total_tasks) return;
      const int size_idx = task / reps;
      const int rep = task % reps;
      outcomes[static_cast<std::size_t>(task)] =
          run_replicate(design, design.sample_sizes[static_cast<std::size_t>(size_idx)],
                        static_cast<std::uint64_t>(rep));
    }
  };
  const int n_workers = std::min(design.threads, total_tasks);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SummaryTable table;
  table.generator = design.generator;
  table.true_k = design.true_k;
  table.seed = design.seed;
  table.replicates = reps;

  for (int size_idx = 0; size_idx < n_sizes; ++size_idx) {
    const int n = design.sample_sizes[static_cast<std::size_t>(size_idx)];
    for (std::size_t kidx = 0; kidx < design.fit_kinds.size(); ++kidx) {
      const ModelKind kind = design.fit_kinds[kidx];
      const Eigen::VectorXd truth = truth_for_kind(design, kind);
      const auto names = design_parameter_names(kind, design.true_alpha.size(),
                                                design.true_beta.size());
      const Eigen::Index dim = truth.size();

      int converged = 0;
      for (int rep = 0; rep < reps; ++rep) {
        const auto& oc = outcomes[static_cast<std::size_t>(size_idx * reps + rep)];
        if (oc.converged[kidx]) ++converged;
      }
      const int failed = reps - converged;

      for (Eigen::Index j = 0; j < dim; ++j) {
        SummaryCell cell;
        cell.fit_kind = kind;
        cell.sample_size = n;
        cell.parameter = names[static_cast<std::size_t>(j)];
        cell.true_value = truth(j);
        cell.replicates_converged = converged;
        cell.replicates_failed = failed;

        if (converged == 0) {
          cell.mean_estimate = kNan;
          cell.mean_model_se = kNan;
          cell.empirical_se = kNan;
          cell.bias = kNan;
          cell.relative_bias = kNan;
          cell.mse = kNan;
          table.cells.push_back(std::move(cell));
          continue;
        }

        CompensatedSum est_sum, se_sum;
        for (int rep = 0; rep < reps; ++rep) {
          const auto& oc = outcomes[static_cast<std::size_t>(size_idx * reps + rep)];
          if (!oc.converged[kidx]) continue;
          est_sum.add(oc.estimates[kidx](j));
          se_sum.add(oc.std_errors[kidx](j));
        }
        const double mean_est = est_sum.value() / converged;
        CompensatedSum sq_sum;
        for (int rep = 0; rep < reps; ++rep) {
          const auto& oc = outcomes[static_cast<std::size_t>(size_idx * reps + rep)];
          if (!oc.converged[kidx]) continue;
          const double d = oc.estimates[kidx](j) - mean_est;
          sq_sum.add(d * d);
        }
        const double pop_var = sq_sum.value() / converged;
        cell.mean_estimate = mean_est;
        cell.mean_model_se = se_sum.value() / converged;
        cell.empirical_se = converged > 1
                                ? std::sqrt(sq_sum.value() / (converged - 1))
                                : kNan;
        cell.bias = mean_est - truth(j);
        cell.relative_bias = cell.bias / truth(j);
        cell.mse = cell.bias * cell.bias + pop_var;
        table.cells.push_back(std::move(cell));
      }
    }
  }
  return table;
}

}  // namespace zic
