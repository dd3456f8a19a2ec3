#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "pathcorr/matrices.hpp"

namespace testsupport {

using pathcorr::Index;
using pathcorr::Mat;
using pathcorr::PartialCorrelationGraph;
using pathcorr::Vec;

inline Mat random_spd(Index d, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> nd;
  Mat A(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) A(i, j) = nd(eng);
  return A * A.transpose() + 0.5 * Mat::Identity(d, d);
}

// symmetric random weights on an edge mask, rescaled so the spectral radius is nu
inline Mat scaled_weights(const Mat& mask, double nu, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Index d = mask.rows();
  Mat R = Mat::Zero(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = i + 1; j < d; ++j)
      if (mask(i, j) != 0.0) {
        double w = u(eng);
        if (std::abs(w) < 0.1) w = w < 0 ? -0.1 : 0.1;
        R(i, j) = R(j, i) = w;
      }
  Eigen::SelfAdjointEigenSolver<Mat> es(R, Eigen::EigenvaluesOnly);
  const double rad = es.eigenvalues().cwiseAbs().maxCoeff();
  if (rad > 0) R *= nu / rad;
  return R;
}

inline Mat dense_mask(Index d) {
  Mat m = Mat::Ones(d, d);
  m.diagonal().setZero();
  return m;
}

inline Mat random_mask(Index d, double p, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::bernoulli_distribution b(p);
  Mat m = Mat::Zero(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = i + 1; j < d; ++j)
      if (b(eng)) m(i, j) = m(j, i) = 1.0;
  return m;
}

// graph with nu(R) in [lo, hi]
inline PartialCorrelationGraph random_graph(Index d, std::uint64_t seed, double p = 0.6, double lo = 0.3,
                                            double hi = 0.9) {
  std::mt19937_64 eng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> u(lo, hi);
  return PartialCorrelationGraph(scaled_weights(random_mask(d, p, seed), u(eng), seed + 17));
}

// (1-R)^-1 rescaled to unit diagonal, via plain inverse
inline Mat dense_oracle(const Mat& R) {
  const Index d = R.rows();
  const Mat M = (Mat::Identity(d, d) - R).inverse();
  Mat P(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) P(i, j) = M(i, j) / std::sqrt(M(i, i) * M(j, j));
  return P;
}

// recursive walk weight sums by length, independent of the library enumerator
inline std::vector<double> brute_walk_sums(const Mat& W, Index s, Index t, const std::vector<char>& interior_ok,
                                           int L) {
  std::vector<double> per(L + 1, 0.0);
  std::function<void(Index, int, double)> go = [&](Index v, int len, double w) {
    for (Index u = 0; u < W.rows(); ++u) {
      if (W(v, u) == 0.0) continue;
      const double nw = w * W(v, u);
      if (u == t) per[len + 1] += nw;
      if (len + 1 < L && interior_ok[u]) go(u, len + 1, nw);
    }
  };
  go(s, 0, 1.0);
  return per;
}

inline double max_abs(const Mat& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace testsupport
