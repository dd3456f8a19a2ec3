#include "pathcorr/sampling.hpp"

#include <cmath>
#include <numbers>

namespace pathcorr {

double GaussianStream::uniform() {
  // midpoint of a 2^-53 grid cell, never 0 or 1
  return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
}

double GaussianStream::normal() {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return z;
  }
  const double u1 = uniform(), u2 = uniform();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * std::numbers::pi * u2;
  spare_ = rad * std::sin(th);
  return rad * std::cos(th);
}

Mat gaussian_draws(const SampleSpec& spec) {
  if (spec.d < 1) throw Error(ErrorCode::ParamOutOfBound, "d must be positive");
  if (spec.n <= spec.d) throw Error(ErrorCode::ParamOutOfBound, "need n > d");
  GaussianStream gs(spec.seed);
  Mat X(spec.n, spec.d);
  for (Index a = 0; a < spec.n; ++a)
    for (Index b = 0; b < spec.d; ++b) X(a, b) = gs.normal();
  return X;
}

Mat sample_covariance(const Mat& X) {
  const Vec mean = X.colwise().mean();
  const Mat C = X.rowwise() - mean.transpose();
  return (C.transpose() * C) / static_cast<double>(X.rows());
}

GraphSample sample_partial_graph(const SampleSpec& spec) {
  const Mat S = sample_covariance(gaussian_draws(spec));
  Eigen::LLT<Mat> llt(S);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularSampleCovariance, "sample covariance singular");
  PrecisionMatrix W = [&] {
    try {
      return PrecisionMatrix(llt.solve(Mat::Identity(spec.d, spec.d)));
    } catch (const Error&) {
      throw Error(ErrorCode::SingularSampleCovariance, "sample covariance numerically singular");
    }
  }();
  GraphSample out{precision_to_partial(W), 0.0, false};
  out.spectral_radius = spectral_radius_sym(out.graph.weights());
  out.flagged = out.spectral_radius >= 1.0;
  return out;
}

std::vector<SeededSample> unflagged_samples(Index d, Index n, std::uint64_t base_seed, int count, int max_tries) {
  std::vector<SeededSample> out;
  for (int t = 0; t < max_tries && static_cast<int>(out.size()) < count; ++t) {
    auto s = sample_partial_graph({d, n, base_seed + t});
    if (!s.flagged) out.push_back({base_seed + t, std::move(s)});
  }
  if (static_cast<int>(out.size()) < count)
    throw Error(ErrorCode::ParamOutOfBound, "too few samples with nu(R) < 1 within the seed budget");
  return out;
}

SeededSample first_flagged_sample(Index d, Index n, std::uint64_t base_seed, int max_tries) {
  for (int t = 0; t < max_tries; ++t) {
    auto s = sample_partial_graph({d, n, base_seed + t});
    if (s.flagged) return {base_seed + t, std::move(s)};
  }
  throw Error(ErrorCode::ParamOutOfBound, "no sample with nu(R) >= 1 within the seed budget");
}

Mat factor_model_precision(const FactorModel& fm) {
  const Index d = fm.weights.size();
  if (d == 0) throw Error(ErrorCode::InvalidArgument, "factor model without factors");
  if (!fm.variances.empty() && static_cast<Index>(fm.variances.size()) != d)
    throw Error(ErrorCode::DimensionMismatch, "one variance per factor");
  Mat W = Mat::Zero(d, d);
  for (Index l = 0; l < d; ++l) {
    if (fm.weights[l].size() != d) throw Error(ErrorCode::DimensionMismatch, "mixing vectors must have length d");
    const double v = fm.variances.empty() ? 1.0 : fm.variances[l];
    if (!(v > 0.0)) throw Error(ErrorCode::ParamOutOfBound, "factor variances must be positive");
    // factor of variance v contributes w w^T / v
    W += fm.weights[l] * fm.weights[l].transpose() / v;
  }
  for (Index i = 0; i < d; ++i)
    if (W(i, i) == 0.0) throw Error(ErrorCode::DegenerateColumn, "node " + std::to_string(i + 1) + " loads on no factor");
  return W;
}

PartialCorrelationGraph factor_model_partial(const FactorModel& fm) {
  return precision_to_partial(PrecisionMatrix(factor_model_precision(fm)));
}

CanonicalKind canonical_kind_from(const std::string& name) {
  if (name == "chain") return CanonicalKind::Chain;
  if (name == "ring") return CanonicalKind::Ring;
  if (name == "one_many_one") return CanonicalKind::OneManyOne;
  if (name == "example_R") return CanonicalKind::ExampleR;
  if (name == "complete") return CanonicalKind::Complete;
  throw Error(ErrorCode::InvalidArgument, "unknown graph kind '" + name + "'");
}

namespace {

PartialCorrelationGraph build(const Mat& R) {
  try {
    return PartialCorrelationGraph(R);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParamOutOfBound, std::string("weights give an invalid graph: ") + e.what());
  }
}

}  // namespace

PartialCorrelationGraph chain_graph(Index d, double r) {
  if (d < 2) throw Error(ErrorCode::ParamOutOfBound, "chain needs d >= 2");
  if (!(std::abs(r) <= 0.5)) throw Error(ErrorCode::ParamOutOfBound, "chain needs |r| <= 1/2");
  Mat R = Mat::Zero(d, d);
  for (Index i = 0; i + 1 < d; ++i) R(i, i + 1) = R(i + 1, i) = r;
  return build(R);
}

PartialCorrelationGraph ring_graph(Index d, double r) {
  if (d < 3) throw Error(ErrorCode::ParamOutOfBound, "ring needs d >= 3");
  if (!(std::abs(r) < 0.5)) throw Error(ErrorCode::ParamOutOfBound, "ring needs |r| < 1/2");
  Mat R = Mat::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    const Index j = (i + 1) % d;
    R(i, j) = R(j, i) = r;
  }
  return build(R);
}

PartialCorrelationGraph one_many_one_graph(Index d, double r) {
  if (d < 3) throw Error(ErrorCode::ParamOutOfBound, "one-many-one needs d >= 3");
  if (!((d - 2) * r * r < 0.5)) throw Error(ErrorCode::ParamOutOfBound, "need (d-2) r^2 < 1/2");
  Mat R = Mat::Zero(d, d);
  for (Index k = 1; k + 1 < d; ++k) {
    R(0, k) = R(k, 0) = r;
    R(d - 1, k) = R(k, d - 1) = r;
  }
  return build(R);
}

PartialCorrelationGraph example_r_graph(double r12, double r13, double r23, double r24, double r34) {
  Mat R = Mat::Zero(4, 4);
  R(0, 1) = R(1, 0) = r12;
  R(0, 2) = R(2, 0) = r13;
  R(1, 2) = R(2, 1) = r23;
  R(1, 3) = R(3, 1) = r24;
  R(2, 3) = R(3, 2) = r34;
  return build(R);
}

PartialCorrelationGraph complete_graph(Index d, double r) {
  if (d < 2) throw Error(ErrorCode::ParamOutOfBound, "complete graph needs d >= 2");
  Mat R = Mat::Constant(d, d, r);
  R.diagonal().setZero();
  return build(R);
}

PartialCorrelationGraph canonical_graph(CanonicalKind kind, const CanonicalParams& p) {
  switch (kind) {
    case CanonicalKind::Chain: return chain_graph(p.d, p.r);
    case CanonicalKind::Ring: return ring_graph(p.d, p.r);
    case CanonicalKind::OneManyOne: return one_many_one_graph(p.d, p.r);
    case CanonicalKind::ExampleR: return example_r_graph(p.r12, p.r13, p.r23, p.r24, p.r34);
    case CanonicalKind::Complete: return complete_graph(p.d, p.r);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown graph kind");
}

CovarianceMatrix martingale_covariance(const MartingaleSpec& spec) {
  const Index T = spec.horizon;
  if (T < 1) throw Error(ErrorCode::ParamOutOfBound, "horizon must be positive");
  if (!spec.innovation_variances.empty() && static_cast<Index>(spec.innovation_variances.size()) != T)
    throw Error(ErrorCode::DimensionMismatch, "one innovation variance per step");
  Vec var(T);
  double prev = 0.0;
  for (Index t = 0; t < T; ++t) {
    const double s2 = spec.innovation_variances.empty() ? 1.0 : spec.innovation_variances[t];
    if (!(s2 > 0.0)) throw Error(ErrorCode::ParamOutOfBound, "innovation variances must be positive");
    prev = spec.alpha * spec.alpha * prev + s2;
    var[t] = prev;
  }
  Mat C(T, T);
  for (Index s = 0; s < T; ++s)
    for (Index t = s; t < T; ++t) C(s, t) = C(t, s) = std::pow(spec.alpha, static_cast<double>(t - s)) * var[s];
  return CovarianceMatrix(C);
}

}  // namespace pathcorr
