#include "pathcorr/chains.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace pathcorr {

namespace {

void check_r(double r) {
  if (!std::isfinite(r) || std::abs(r) > 0.5)
    throw Error(ErrorCode::ParamOutOfBound, "chain weight must satisfy |r| <= 1/2");
}

}  // namespace

ChainSolution::ChainSolution(int d, std::vector<double> c, std::vector<double> l)
    : d_(d), c_(std::move(c)), l_(std::move(l)) {}

double ChainSolution::c(int k) const {
  if (k < 2 || k > d_) throw Error(ErrorCode::IndexOutOfRange, "chain length " + std::to_string(k));
  return c_[k];
}

double ChainSolution::ell(int k) const {
  if (k < 2 || k > d_) throw Error(ErrorCode::IndexOutOfRange, "chain length " + std::to_string(k));
  return l_[k];
}

double ChainSolution::rho(int k) const { return c(k) / (1.0 - ell(k)); }

void validate_chain(const ChainSpec& spec) {
  if (spec.d < 2) throw Error(ErrorCode::ParamOutOfBound, "chain needs d >= 2");
  check_r(spec.r);
}

ChainSolution chain_sums(const ChainSpec& spec) {
  validate_chain(spec);
  std::vector<double> c(spec.d + 1, 0.0), l(spec.d + 1, 0.0);
  c[2] = spec.r;
  l[2] = 0.0;
  for (int k = 3; k <= spec.d; ++k) {
    const double den = 1.0 - l[k - 1];
    if (!(den > 0.0)) throw Error(ErrorCode::DegenerateDenominator, "1 - l_{d-1} <= 0");
    c[k] = spec.r * c[k - 1] / den;
    l[k] = l[k - 1] + c[k - 1] * c[k - 1] / den;
  }
  return ChainSolution(spec.d, std::move(c), std::move(l));
}

double chain_pair_corr(const ChainSolution& sol, int i, int j) {
  const int d = sol.d();
  if (i < 1 || j > d || i >= j) throw Error(ErrorCode::IndexOutOfRange, "need 1 <= i < j <= d");
  const int n = j - i + 1;
  const double ln = sol.ell(n);
  const double a = 1.0 - ln - sol.ell(i + 1);
  const double b = 1.0 - ln - sol.ell(d - j + 2);
  if (!(a > 0.0 && b > 0.0)) throw Error(ErrorCode::DegenerateDenominator, "chain denominator <= 0");
  return sol.c(n) / std::sqrt(a * b);
}

double chain_pair_corr(const ChainSpec& spec, int i, int j) {
  return chain_pair_corr(chain_sums(spec), i, j);
}

double endpoint_corr_recurrence(const ChainSpec& spec) {
  validate_chain(spec);
  if (spec.r == 0.0) return 0.0;
  double prev2 = 1.0, prev1 = spec.r;
  for (int k = 3; k <= spec.d; ++k) {
    const double den = prev2 * (1.0 - prev1 * prev1);
    if (den == 0.0) throw Error(ErrorCode::DegenerateDenominator, "endpoint recurrence denominator is 0");
    const double next = prev1 * prev1 / den;
    prev2 = prev1;
    prev1 = next;
  }
  return prev1;
}

double correlation_length(double r) {
  check_r(r);
  if (r == 0.0) throw Error(ErrorCode::UndefinedAtZero, "correlation length undefined at r = 0");
  const double a = std::abs(r);
  if (a == 0.5) return std::numeric_limits<double>::infinity();
  return 1.0 / std::log((1.0 + std::sqrt(1.0 - 4.0 * r * r)) / (2.0 * a));
}

double l_infinity(double r) {
  check_r(r);
  return 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - 4.0 * r * r)));
}

double l_infinity_catalan(double r, int terms) {
  check_r(r);
  // sum_{n>=1} C_{n-1} r^{2n}
  double cat = 1.0, pw = r * r, s = 0.0;
  for (int n = 1; n <= terms; ++n) {
    s += cat * pw;
    const double m = n - 1;  // C_m -> C_{m+1}
    cat *= 2.0 * (2.0 * m + 1.0) / (m + 2.0);
    pw *= r * r;
  }
  return s;
}

double amplification_factor(int k, int m, double r) {
  if (k < 0 || m < 0) throw Error(ErrorCode::ParamOutOfBound, "k and m must be nonnegative");
  check_r(r);
  const auto sol = chain_sums({std::max(k, m) + 2, r});
  const double lk = sol.ell(k + 2), lm = sol.ell(m + 2);
  return (1.0 - lk) / (1.0 - lk - lm);
}

}  // namespace pathcorr
