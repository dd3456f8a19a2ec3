#pragma once

#include <vector>

#include "pathcorr/matrices.hpp"

namespace pathcorr {

// homogeneous chain 1 - 2 - ... - d with every link r
struct ChainSpec {
  int d = 2;
  double r = 0.0;
};

// c(k), ell(k), rho(k) defined for k = 2..d
class ChainSolution {
 public:
  ChainSolution(int d, std::vector<double> c, std::vector<double> l);
  int d() const { return d_; }
  double c(int k) const;
  double ell(int k) const;
  double rho(int k) const;  // endpoint correlation of a k-node chain

 private:
  int d_;
  std::vector<double> c_, l_;
};

void validate_chain(const ChainSpec& spec);
ChainSolution chain_sums(const ChainSpec& spec);
// positions are 1-based, 1 <= i < j <= d
double chain_pair_corr(const ChainSpec& spec, int i, int j);
double chain_pair_corr(const ChainSolution& sol, int i, int j);
double endpoint_corr_recurrence(const ChainSpec& spec);
// +inf at |r| = 1/2
double correlation_length(double r);
double l_infinity(double r);
double l_infinity_catalan(double r, int terms);
double amplification_factor(int k, int m, double r);

}  // namespace pathcorr
