#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "pathcorr/errors.hpp"

namespace pathcorr {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Index = Eigen::Index;
using NodeSet = std::vector<Index>;

struct Tolerances {
  double sym = 1e-9;  // relative to max |entry|
  double pd = 1e-12;  // smallest eigenvalue vs largest
};

class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(const Mat& raw, const Tolerances& tol = {});
  Index dim() const { return c_.rows(); }
  const Mat& entries() const { return c_; }
  double operator()(Index i, Index j) const { return c_(i, j); }

 private:
  Mat c_;
};

class PrecisionMatrix {
 public:
  explicit PrecisionMatrix(const Mat& raw, const Tolerances& tol = {});
  Index dim() const { return w_.rows(); }
  const Mat& entries() const { return w_; }
  double operator()(Index i, Index j) const { return w_(i, j); }

 private:
  Mat w_;
};

class MarginalCorrelationMatrix {
 public:
  explicit MarginalCorrelationMatrix(const Mat& raw, const Tolerances& tol = {});
  Index dim() const { return p_.rows(); }
  const Mat& entries() const { return p_; }
  double operator()(Index i, Index j) const { return p_(i, j); }

 private:
  Mat p_;
};

// R with zero diagonal, (1 - R) positive definite
class PartialCorrelationGraph {
 public:
  explicit PartialCorrelationGraph(const Mat& R, std::vector<std::string> labels = {},
                                   std::optional<Vec> scale = std::nullopt,
                                   const Tolerances& tol = {});

  Index dim() const { return r_.rows(); }
  const Mat& weights() const { return r_; }
  double operator()(Index i, Index j) const { return r_(i, j); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::optional<Vec>& scale() const { return scale_; }
  bool has_scale() const { return scale_.has_value(); }

  Index index_of(const std::string& label) const;
  NodeSet indices_of(const std::vector<std::string>& labels) const;
  // induced subgraph on keep (order preserved), r_ij unchanged
  PartialCorrelationGraph subgraph(const NodeSet& keep) const;

 private:
  Mat r_;
  std::vector<std::string> labels_;
  std::optional<Vec> scale_;
};

enum class Regime { Absolute, Conditional, RescaleRequired };
const char* regime_name(Regime r) noexcept;

struct SpectralReport {
  double nu_R = 0.0;
  double nu_R_plus = 0.0;
  Regime regime = Regime::Absolute;
};

std::vector<std::string> default_labels(Index d);

CovarianceMatrix validate_covariance(const Mat& raw, const Tolerances& tol = {});
PrecisionMatrix validate_precision(const Mat& raw, const Tolerances& tol = {});

MarginalCorrelationMatrix cov_to_marginal(const CovarianceMatrix& C);
PrecisionMatrix cov_to_precision(const CovarianceMatrix& C);
CovarianceMatrix precision_to_cov(const PrecisionMatrix& W);
PartialCorrelationGraph precision_to_partial(const PrecisionMatrix& W,
                                             std::vector<std::string> labels = {});
PrecisionMatrix partial_to_precision(const PartialCorrelationGraph& g);
MarginalCorrelationMatrix partial_to_marginal_oracle(const PartialCorrelationGraph& g);
SpectralReport spectral_report(const PartialCorrelationGraph& g);

// 2-norm condition number of (1 - R); callers flag values above 1e8
double oracle_condition(const PartialCorrelationGraph& g);

// helpers shared across modules
double spectral_radius_sym(const Mat& A);
double spectral_radius(const Mat& A);  // general square matrix
Mat spd_inverse(const Mat& A, ErrorCode on_fail);
double spd_logdet(const Mat& A, ErrorCode on_fail);
Mat submatrix(const Mat& A, const NodeSet& rows, const NodeSet& cols);
NodeSet complement(Index d, const NodeSet& s);
void check_node_set(Index d, const NodeSet& s, const char* what);

}  // namespace pathcorr
