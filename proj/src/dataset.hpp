#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace zic {

enum class ModelKind { Poisson, NegBin, Zip, Zinb, Mzip, Mzinb };

constexpr ModelKind kAllModelKinds[] = {ModelKind::Poisson, ModelKind::NegBin,
                                        ModelKind::Zip,     ModelKind::Zinb,
                                        ModelKind::Mzip,    ModelKind::Mzinb};

/// Carries an overdispersion parameter k.
bool has_dispersion(ModelKind kind);
/// Has a logistic zero-inflation part (needs a nonempty Z design).
bool has_zero_part(ModelKind kind);
/// Coefficients act on the population mean (constant IDR).
bool is_marginal(ModelKind kind);

const char* model_kind_name(ModelKind kind);
std::optional<ModelKind> parse_model_kind(const std::string& name);

/// Count responses with the count-part design X and zero-part design Z.
/// Z has zero columns for models without a zero-inflation part. Rows are
/// split once into zero / positive index sets at construction.
class Dataset {
 public:
  Dataset(std::vector<std::int64_t> y, Eigen::MatrixXd x,
          std::vector<std::string> x_names, Eigen::MatrixXd z,
          std::vector<std::string> z_names);

  Eigen::Index n() const { return static_cast<Eigen::Index>(y_.size()); }
  Eigen::Index p() const { return x_.cols(); }
  Eigen::Index q() const { return z_.cols(); }

  const std::vector<std::int64_t>& y() const { return y_; }
  const Eigen::MatrixXd& x() const { return x_; }
  const Eigen::MatrixXd& z() const { return z_; }
  const std::vector<std::string>& x_names() const { return x_names_; }
  const std::vector<std::string>& z_names() const { return z_names_; }

  const std::vector<Eigen::Index>& zero_rows() const { return zero_rows_; }
  const std::vector<Eigen::Index>& positive_rows() const { return pos_rows_; }

  /// Content hash used to refuse cross-dataset model comparisons.
  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  std::vector<std::int64_t> y_;
  Eigen::MatrixXd x_;
  Eigen::MatrixXd z_;
  std::vector<std::string> x_names_;
  std::vector<std::string> z_names_;
  std::vector<Eigen::Index> zero_rows_;
  std::vector<Eigen::Index> pos_rows_;
  std::uint64_t fingerprint_ = 0;
};

/// Free-parameter layout of a model on a given dataset; pack order is
/// (alpha, beta, log_k).
struct ParamLayout {
  Eigen::Index q = 0;
  Eigen::Index p = 0;
  bool has_k = false;

  ParamLayout() = default;
  ParamLayout(ModelKind kind, const Dataset& data);

  Eigen::Index size() const {
    return q + p + static_cast<Eigen::Index>(has_k);
  }
};

/// Model parameters on the internal scale: zero-part alpha, count-part beta,
/// and log_k with k = exp(log_k) kept positive by construction.
struct ParameterVector {
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta;
  std::optional<double> log_k;

  double k() const;

  Eigen::VectorXd packed() const;
  static ParameterVector unpack(const Eigen::VectorXd& packed,
                                const ParamLayout& layout);
};

/// Display names aligned with the packed order, "zero:"/"count:" prefixed,
/// with "k" last.
std::vector<std::string> parameter_names(ModelKind kind, const Dataset& data);

}  // namespace zic
