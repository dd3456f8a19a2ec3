#include "pathcorr/matrices.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace pathcorr {

namespace {

Mat symmetrised(const Mat& raw, const Tolerances& tol, const char* what) {
  if (raw.rows() != raw.cols())
    throw Error(ErrorCode::NotSquare, std::string(what) + " must be square");
  if (raw.rows() == 0) throw Error(ErrorCode::NotSquare, std::string(what) + " is empty");
  if (!raw.allFinite()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " has non-finite entries");
  const double big = raw.cwiseAbs().maxCoeff();
  const double scale = big > 0.0 ? big : 1.0;
  const double asym = (raw - raw.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol.sym * scale)
    throw Error(ErrorCode::NotSymmetric,
                std::string(what) + " asymmetry " + std::to_string(asym) + " exceeds tolerance");
  return 0.5 * (raw + raw.transpose());
}

void require_pd(const Mat& a, const Tolerances& tol, const char* what) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  const Vec& ev = es.eigenvalues();
  const double lo = ev.minCoeff(), hi = ev.cwiseAbs().maxCoeff();
  if (!(lo > tol.pd * hi))
    throw Error(ErrorCode::NotPositiveDefinite,
                std::string(what) + " smallest eigenvalue " + std::to_string(lo));
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(const Mat& raw, const Tolerances& tol)
    : c_(symmetrised(raw, tol, "covariance")) {
  require_pd(c_, tol, "covariance");
}

PrecisionMatrix::PrecisionMatrix(const Mat& raw, const Tolerances& tol)
    : w_(symmetrised(raw, tol, "precision")) {
  require_pd(w_, tol, "precision");
}

MarginalCorrelationMatrix::MarginalCorrelationMatrix(const Mat& raw, const Tolerances& tol)
    : p_(symmetrised(raw, tol, "marginal correlation")) {
  const Index d = p_.rows();
  for (Index i = 0; i < d; ++i) {
    if (std::abs(p_(i, i) - 1.0) > tol.sym)
      throw Error(ErrorCode::InvalidMarginal, "diagonal entry differs from 1");
    p_(i, i) = 1.0;
  }
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      if (std::abs(p_(i, j)) > 1.0 + tol.sym)
        throw Error(ErrorCode::InvalidMarginal, "entry outside [-1, 1]");
      p_(i, j) = std::clamp(p_(i, j), -1.0, 1.0);
    }
  Eigen::SelfAdjointEigenSolver<Mat> es(p_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9 * std::max(1.0, es.eigenvalues().maxCoeff()))
    throw Error(ErrorCode::InvalidMarginal, "not positive semi-definite");
}

PartialCorrelationGraph::PartialCorrelationGraph(const Mat& R, std::vector<std::string> labels,
                                                 std::optional<Vec> scale, const Tolerances& tol)
    : r_(symmetrised(R, tol, "partial correlation matrix")),
      labels_(std::move(labels)),
      scale_(std::move(scale)) {
  const Index d = r_.rows();
  for (Index i = 0; i < d; ++i) {
    if (std::abs(r_(i, i)) > tol.sym)
      throw Error(ErrorCode::InvalidGraph, "diagonal of R must be zero");
    r_(i, i) = 0.0;
  }
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      if (i != j && !(std::abs(r_(i, j)) < 1.0))
        throw Error(ErrorCode::InvalidGraph, "off-diagonal entry outside (-1, 1)");
  require_pd(Mat::Identity(d, d) - r_, tol, "1 - R");

  if (labels_.empty()) labels_ = default_labels(d);
  if (static_cast<Index>(labels_.size()) != d)
    throw Error(ErrorCode::DimensionMismatch, "label count differs from dimension");
  std::unordered_set<std::string> seen(labels_.begin(), labels_.end());
  if (static_cast<Index>(seen.size()) != d)
    throw Error(ErrorCode::InvalidArgument, "duplicate node labels");
  if (scale_) {
    if (scale_->size() != d) throw Error(ErrorCode::DimensionMismatch, "scale length differs from dimension");
    if (!(scale_->minCoeff() > 0.0)) throw Error(ErrorCode::MissingScale, "scale must be strictly positive");
  }
}

Index PartialCorrelationGraph::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw Error(ErrorCode::UnknownLabel, "no node labelled '" + label + "'");
  return static_cast<Index>(it - labels_.begin());
}

NodeSet PartialCorrelationGraph::indices_of(const std::vector<std::string>& labels) const {
  NodeSet out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(index_of(l));
  return out;
}

PartialCorrelationGraph PartialCorrelationGraph::subgraph(const NodeSet& keep) const {
  check_node_set(dim(), keep, "kept set");
  if (keep.empty()) throw Error(ErrorCode::EmptyRemainder, "subgraph on no nodes");
  std::vector<std::string> lab;
  for (Index k : keep) lab.push_back(labels_[k]);
  std::optional<Vec> sc;
  if (scale_) {
    Vec s(keep.size());
    for (size_t a = 0; a < keep.size(); ++a) s[a] = (*scale_)[keep[a]];
    sc = s;
  }
  return PartialCorrelationGraph(submatrix(r_, keep, keep), std::move(lab), std::move(sc));
}

const char* regime_name(Regime r) noexcept {
  switch (r) {
    case Regime::Absolute: return "absolute";
    case Regime::Conditional: return "conditional";
    case Regime::RescaleRequired: return "rescale-required";
  }
  return "unknown";
}

std::vector<std::string> default_labels(Index d) {
  std::vector<std::string> out;
  out.reserve(d);
  for (Index i = 0; i < d; ++i) out.push_back(std::to_string(i + 1));
  return out;
}

CovarianceMatrix validate_covariance(const Mat& raw, const Tolerances& tol) {
  return CovarianceMatrix(raw, tol);
}

PrecisionMatrix validate_precision(const Mat& raw, const Tolerances& tol) {
  return PrecisionMatrix(raw, tol);
}

MarginalCorrelationMatrix cov_to_marginal(const CovarianceMatrix& C) {
  const Vec s = C.entries().diagonal().cwiseSqrt().cwiseInverse();
  Mat p = s.asDiagonal() * C.entries() * s.asDiagonal();
  p.diagonal().setOnes();
  return MarginalCorrelationMatrix(p);
}

PrecisionMatrix cov_to_precision(const CovarianceMatrix& C) {
  return PrecisionMatrix(spd_inverse(C.entries(), ErrorCode::SingularMatrix));
}

CovarianceMatrix precision_to_cov(const PrecisionMatrix& W) {
  return CovarianceMatrix(spd_inverse(W.entries(), ErrorCode::SingularMatrix));
}

PartialCorrelationGraph precision_to_partial(const PrecisionMatrix& W,
                                             std::vector<std::string> labels) {
  const Vec lam = W.entries().diagonal().cwiseSqrt();
  const Vec inv = lam.cwiseInverse();
  Mat R = -(inv.asDiagonal() * W.entries() * inv.asDiagonal());
  R.diagonal().setZero();
  return PartialCorrelationGraph(R, std::move(labels), lam);
}

PrecisionMatrix partial_to_precision(const PartialCorrelationGraph& g) {
  if (!g.has_scale()) throw Error(ErrorCode::MissingScale, "graph was built without a scale vector");
  const Vec& lam = *g.scale();
  const Index d = g.dim();
  return PrecisionMatrix(lam.asDiagonal() * (Mat::Identity(d, d) - g.weights()) * lam.asDiagonal());
}

MarginalCorrelationMatrix partial_to_marginal_oracle(const PartialCorrelationGraph& g) {
  const Index d = g.dim();
  const Mat m = spd_inverse(Mat::Identity(d, d) - g.weights(), ErrorCode::SingularMatrix);
  const Vec s = m.diagonal().cwiseSqrt().cwiseInverse();
  Mat p = s.asDiagonal() * m * s.asDiagonal();
  p.diagonal().setOnes();
  return MarginalCorrelationMatrix(p);
}

double oracle_condition(const PartialCorrelationGraph& g) {
  const Index d = g.dim();
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat::Identity(d, d) - g.weights(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
}

SpectralReport spectral_report(const PartialCorrelationGraph& g) {
  SpectralReport rep;
  rep.nu_R = spectral_radius_sym(g.weights());
  rep.nu_R_plus = spectral_radius_sym(g.weights().cwiseAbs());
  // Perron root dominates; clamp rounding noise
  rep.nu_R_plus = std::max(rep.nu_R_plus, rep.nu_R);
  if (rep.nu_R_plus < 1.0)
    rep.regime = Regime::Absolute;
  else if (rep.nu_R < 1.0)
    rep.regime = Regime::Conditional;
  else
    rep.regime = Regime::RescaleRequired;
  return rep;
}

double spectral_radius_sym(const Mat& A) {
  if (A.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double spectral_radius(const Mat& A) {
  if (A.size() == 0) return 0.0;
  Eigen::EigenSolver<Mat> es(A, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Mat spd_inverse(const Mat& A, ErrorCode on_fail) {
  const Index n = A.rows();
  if (n == 0) return Mat(0, 0);
  Eigen::LLT<Mat> llt(A);
  if (llt.info() != Eigen::Success) {
    // indefinite but possibly invertible
    Eigen::FullPivLU<Mat> lu(A);
    if (!lu.isInvertible()) throw Error(on_fail, "matrix is singular");
    return lu.inverse();
  }
  return llt.solve(Mat::Identity(n, n));
}

double spd_logdet(const Mat& A, ErrorCode on_fail) {
  if (A.rows() == 0) return 0.0;
  Eigen::LLT<Mat> llt(A);
  if (llt.info() != Eigen::Success) throw Error(on_fail, "matrix is not positive definite");
  const Mat& L = llt.matrixLLT();
  double s = 0.0;
  for (Index i = 0; i < L.rows(); ++i) s += std::log(L(i, i));
  return 2.0 * s;
}

Mat submatrix(const Mat& A, const NodeSet& rows, const NodeSet& cols) {
  Mat out(rows.size(), cols.size());
  for (size_t a = 0; a < rows.size(); ++a)
    for (size_t b = 0; b < cols.size(); ++b) out(a, b) = A(rows[a], cols[b]);
  return out;
}

NodeSet complement(Index d, const NodeSet& s) {
  std::vector<char> in(d, 0);
  for (Index k : s) in[k] = 1;
  NodeSet out;
  for (Index i = 0; i < d; ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

void check_node_set(Index d, const NodeSet& s, const char* what) {
  std::vector<char> in(d, 0);
  for (Index k : s) {
    if (k < 0 || k >= d) throw Error(ErrorCode::IndexOutOfRange, std::string(what) + ": node index out of range");
    if (in[k]) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": repeated node");
    in[k] = 1;
  }
}

}  // namespace pathcorr
