#include "dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <unordered_set>

#include "errors.hpp"

namespace zic {

bool has_dispersion(ModelKind kind) {
  return kind == ModelKind::NegBin || kind == ModelKind::Zinb ||
         kind == ModelKind::Mzinb;
}

bool has_zero_part(ModelKind kind) {
  return kind == ModelKind::Zip || kind == ModelKind::Zinb ||
         kind == ModelKind::Mzip || kind == ModelKind::Mzinb;
}

bool is_marginal(ModelKind kind) {
  return kind != ModelKind::Zip && kind != ModelKind::Zinb;
}

const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Poisson: return "poisson";
    case ModelKind::NegBin: return "nb";
    case ModelKind::Zip: return "zip";
    case ModelKind::Zinb: return "zinb";
    case ModelKind::Mzip: return "mzip";
    case ModelKind::Mzinb: return "mzinb";
  }
  return "unknown";
}

std::optional<ModelKind> parse_model_kind(const std::string& name) {
  std::string lower;
  lower.reserve(name.size());
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(c)));
  for (ModelKind kind : kAllModelKinds) {
    if (lower == model_kind_name(kind)) return kind;
  }
  if (lower == "negbin" || lower == "negative_binomial") return ModelKind::NegBin;
  return std::nullopt;
}

namespace {

void check_unique_names(const std::vector<std::string>& names,
                        const char* which) {
  std::unordered_set<std::string> seen;
  for (const auto& name : names) {
    if (!seen.insert(name).second) {
      throw_error(ErrorCode::InvalidArgument,
                  std::string("duplicate column label '") + name + "' in " +
                      which + " design");
    }
  }
}

std::uint64_t fnv1a_bytes(std::uint64_t h, const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace

Dataset::Dataset(std::vector<std::int64_t> y, Eigen::MatrixXd x,
                 std::vector<std::string> x_names, Eigen::MatrixXd z,
                 std::vector<std::string> z_names)
    : y_(std::move(y)),
      x_(std::move(x)),
      z_(std::move(z)),
      x_names_(std::move(x_names)),
      z_names_(std::move(z_names)) {
  const auto n = static_cast<Eigen::Index>(y_.size());
  if (n == 0) throw_error(ErrorCode::InvalidArgument, "dataset is empty");
  if (x_.rows() != n || (z_.cols() > 0 && z_.rows() != n)) {
    throw_error(ErrorCode::DimensionMismatch,
                "design matrix row count does not match response length");
  }
  if (z_.cols() == 0) z_.resize(n, 0);
  if (x_names_.size() != static_cast<std::size_t>(x_.cols()) ||
      z_names_.size() != static_cast<std::size_t>(z_.cols())) {
    throw_error(ErrorCode::DimensionMismatch,
                "column label count does not match design width");
  }
  check_unique_names(x_names_, "count-part");
  check_unique_names(z_names_, "zero-part");
  if (!x_.allFinite() || !z_.allFinite()) {
    throw_error(ErrorCode::InvalidArgument,
                "design matrices must contain finite values");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (y_[static_cast<std::size_t>(i)] < 0) {
      throw_error(ErrorCode::InvalidArgument,
                  "response counts must be nonnegative (row " +
                      std::to_string(i + 1) + ")");
    }
    if (y_[static_cast<std::size_t>(i)] == 0) {
      zero_rows_.push_back(i);
    } else {
      pos_rows_.push_back(i);
    }
  }

  std::uint64_t h = 0xCBF29CE484222325ULL;
  const std::uint64_t dims[3] = {static_cast<std::uint64_t>(n),
                                 static_cast<std::uint64_t>(x_.cols()),
                                 static_cast<std::uint64_t>(z_.cols())};
  h = fnv1a_bytes(h, dims, sizeof(dims));
  h = fnv1a_bytes(h, y_.data(), y_.size() * sizeof(std::int64_t));
  h = fnv1a_bytes(h, x_.data(), static_cast<std::size_t>(x_.size()) * sizeof(double));
  if (z_.size() > 0) {
    h = fnv1a_bytes(h, z_.data(),
                    static_cast<std::size_t>(z_.size()) * sizeof(double));
  }
  for (const auto& name : x_names_) h = fnv1a_bytes(h, name.data(), name.size());
  for (const auto& name : z_names_) h = fnv1a_bytes(h, name.data(), name.size());
  fingerprint_ = h;
}

ParamLayout::ParamLayout(ModelKind kind, const Dataset& data)
    : q(has_zero_part(kind) ? data.q() : 0),
      p(data.p()),
      has_k(has_dispersion(kind)) {
  if (has_zero_part(kind) && data.q() == 0) {
    throw_error(ErrorCode::InvalidArgument,
                std::string(model_kind_name(kind)) +
                    " requires a nonempty zero-part design");
  }
}

double ParameterVector::k() const {
  if (!log_k) {
    throw_error(ErrorCode::InvalidArgument,
                "model has no overdispersion parameter");
  }
  return std::exp(*log_k);
}

Eigen::VectorXd ParameterVector::packed() const {
  Eigen::VectorXd out(alpha.size() + beta.size() + (log_k ? 1 : 0));
  out.head(alpha.size()) = alpha;
  out.segment(alpha.size(), beta.size()) = beta;
  if (log_k) out(out.size() - 1) = *log_k;
  return out;
}

ParameterVector ParameterVector::unpack(const Eigen::VectorXd& packed,
                                        const ParamLayout& layout) {
  if (packed.size() != layout.size()) {
    throw_error(ErrorCode::DimensionMismatch,
                "packed parameter vector length does not match layout");
  }
  ParameterVector params;
  params.alpha = packed.head(layout.q);
  params.beta = packed.segment(layout.q, layout.p);
  if (layout.has_k) params.log_k = packed(packed.size() - 1);
  return params;
}

std::vector<std::string> parameter_names(ModelKind kind, const Dataset& data) {
  std::vector<std::string> names;
  if (has_zero_part(kind)) {
    for (const auto& name : data.z_names()) names.push_back("zero:" + name);
  }
  for (const auto& name : data.x_names()) names.push_back("count:" + name);
  if (has_dispersion(kind)) names.push_back("k");
  return names;
}

}  // namespace zic
