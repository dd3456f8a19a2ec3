#include "pathcorr/gaussinfo.hpp"

#include <cmath>

#include "pathcorr/pathsum.hpp"

namespace pathcorr {

namespace {

constexpr double kEarlyStop = 1e-14;

// diagonal block of 1 - R
Mat one_minus(const Mat& R, const NodeSet& a) {
  Mat m = -submatrix(R, a, a);
  m.diagonal().array() += 1.0;
  return m;
}

}  // namespace

void validate_partition(Index d, const TriPartition& part) {
  if (part.A.empty() || part.B.empty()) throw Error(ErrorCode::InvalidArgument, "A and B must be nonempty");
  NodeSet all = part.A;
  all.insert(all.end(), part.B.begin(), part.B.end());
  all.insert(all.end(), part.Z.begin(), part.Z.end());
  check_node_set(d, all, "partition");
  if (static_cast<Index>(all.size()) != d)
    throw Error(ErrorCode::InvalidArgument, "A, B, Z must cover every node");
}

const char* method_name(InfoMethod m) noexcept {
  return m == InfoMethod::Closed ? "closed" : "trace-series";
}

double InfoResult::bits() const { return nats / std::log(2.0); }

Mat t_aba(const PartialCorrelationGraph& g, const TriPartition& part) {
  validate_partition(g.dim(), part);
  const Mat& R = g.weights();
  const Mat RAB = submatrix(R, part.A, part.B);
  Eigen::LLT<Mat> lb(one_minus(R, part.B));
  Eigen::LLT<Mat> la(one_minus(R, part.A));
  if (lb.info() != Eigen::Success || la.info() != Eigen::Success)
    throw Error(ErrorCode::SingularBlock, "1 - R_BB or 1 - R_AA not invertible");
  const Mat X = RAB * lb.solve(RAB.transpose());  // symmetric
  // X (1 - R_AA)^-1 = (la.solve(X))^T
  return la.solve(X).transpose();
}

InfoResult conditional_mi_closed(const PartialCorrelationGraph& g, const TriPartition& part) {
  validate_partition(g.dim(), part);
  const Mat& R = g.weights();
  const Mat RAB = submatrix(R, part.A, part.B);
  const Mat MAA = one_minus(R, part.A);
  Eigen::LLT<Mat> lb(one_minus(R, part.B));
  if (lb.info() != Eigen::Success) throw Error(ErrorCode::SingularBlock, "1 - R_BB not invertible");
  // det(1 - T) = det(M_AA - R_AB M_BB^-1 R_BA) / det(M_AA)
  const Mat schur = MAA - RAB * lb.solve(RAB.transpose());
  InfoResult r;
  r.method = InfoMethod::Closed;
  r.nats = -0.5 * (spd_logdet(schur, ErrorCode::SingularBlock) - spd_logdet(MAA, ErrorCode::SingularBlock));
  r.cross_check = conditional_mi_entropy(g, part);
  return r;
}

InfoResult conditional_mi_closed(const PrecisionMatrix& W, const TriPartition& part) {
  return conditional_mi_closed(precision_to_partial(W), part);
}

double conditional_mi_entropy(const PartialCorrelationGraph& g, const TriPartition& part) {
  validate_partition(g.dim(), part);
  const Index d = g.dim();
  const Mat W = Mat::Identity(d, d) - g.weights();
  NodeSet AB = part.A;
  AB.insert(AB.end(), part.B.begin(), part.B.end());
  const Index dA = part.A.size();
  // covariance of (A, B) given Z is the inverse of the AB precision block
  const Mat CabZ = spd_inverse(submatrix(W, AB, AB), ErrorCode::SingularBlock);
  const double ldA_Z = spd_logdet(CabZ.topLeftCorner(dA, dA), ErrorCode::SingularBlock);
  const double ldA_BZ = -spd_logdet(submatrix(W, part.A, part.A), ErrorCode::SingularBlock);
  return 0.5 * (ldA_Z - ldA_BZ);
}

double t_aba_rescale_bound(const PartialCorrelationGraph& g, const TriPartition& part) {
  return 2.0 / (1.0 + spectral_radius(t_aba(g, part)));
}

InfoResult conditional_mi_series(const PartialCorrelationGraph& g, const TriPartition& part, int n_max,
                                 std::optional<double> q) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "n_max must be at least 1");
  Mat T = t_aba(g, part);
  const Index dA = T.rows();
  const double nu = spectral_radius(T);
  InfoResult r;
  r.method = InfoMethod::TraceSeries;
  double offset = 0.0;
  if (q) {
    const double bound = 2.0 / (1.0 + nu);
    if (!(*q > 0.0 && *q < bound))
      throw Error(ErrorCode::QOutOfRange, "q must lie in (0, " + std::to_string(bound) + ")");
    T = (1.0 - *q) * Mat::Identity(dA, dA) + *q * T;
    offset = 0.5 * static_cast<double>(dA) * std::log(*q);
    r.q = *q;
  } else if (nu >= 1.0) {
    throw Error(ErrorCode::SpectralRadiusTooLarge, "nu(T_ABA) >= 1; use the rescaled series");
  }
  Mat P = T;
  double s = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const double term = P.trace() / (2.0 * n);
    r.series_terms.push_back(term);
    s += term;
    if (std::abs(term) < kEarlyStop) break;
    P = P * T;
  }
  r.nats = s + offset;
  return r;
}

LoopInfo loop_sum_mi_identity(const PartialCorrelationGraph& g, Index i, Index j) {
  const Index d = g.dim();
  if (d < 3) throw Error(ErrorCode::InvalidArgument, "identity needs at least 3 nodes");
  if (i < 0 || i >= d || j < 0 || j >= d || i == j) throw Error(ErrorCode::IndexOutOfRange, "need distinct i, j");
  TriPartition part;
  part.A = {i};
  part.Z = {j};
  for (Index k = 0; k < d; ++k)
    if (k != i && k != j) part.B.push_back(k);
  LoopInfo out;
  out.loop_sum = loop_sum_closed(g, i, j);
  out.mi = conditional_mi_closed(g, part).nats;
  out.residual = std::abs(out.loop_sum - (1.0 - std::exp(-2.0 * out.mi)));
  return out;
}

}  // namespace pathcorr
