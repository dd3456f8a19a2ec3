#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pathcorr/matrices.hpp"

namespace pathcorr {

inline constexpr const char* kGeneratorId = "mt19937_64+box-muller";

// mt19937_64 words -> 53-bit uniforms in (0,1) -> Box-Muller pairs
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}
  double uniform();
  double normal();

 private:
  std::mt19937_64 eng_;
  std::optional<double> spare_;
};

struct SampleSpec {
  Index d = 2;
  Index n = 10;
  std::uint64_t seed = 0;
};

struct GraphSample {
  PartialCorrelationGraph graph;
  double spectral_radius = 0.0;
  bool flagged = false;  // nu(R) >= 1
};

// row-major n x d draws, the same stream every sampler uses
Mat gaussian_draws(const SampleSpec& spec);
// denominator n
Mat sample_covariance(const Mat& X);
GraphSample sample_partial_graph(const SampleSpec& spec);

struct SeededSample {
  std::uint64_t seed = 0;
  GraphSample sample;
};

// first `count` seeds from base_seed upward whose sample is not flagged
std::vector<SeededSample> unflagged_samples(Index d, Index n, std::uint64_t base_seed, int count,
                                            int max_tries = 1000);
// first flagged sample from base_seed upward
SeededSample first_flagged_sample(Index d, Index n, std::uint64_t base_seed, int max_tries = 1000);

struct FactorModel {
  std::vector<Vec> weights;       // d mixing vectors of length d
  std::vector<double> variances;  // empty means all 1
};

Mat factor_model_precision(const FactorModel& fm);
PartialCorrelationGraph factor_model_partial(const FactorModel& fm);

enum class CanonicalKind { Chain, Ring, OneManyOne, ExampleR, Complete };
CanonicalKind canonical_kind_from(const std::string& name);

struct CanonicalParams {
  Index d = 3;
  double r = 0.0;
  // example_R weights r12, r13, r23, r24, r34 (r14 = 0)
  double r12 = 0.0, r13 = 0.0, r23 = 0.0, r24 = 0.0, r34 = 0.0;
};

PartialCorrelationGraph canonical_graph(CanonicalKind kind, const CanonicalParams& p);
PartialCorrelationGraph chain_graph(Index d, double r);
PartialCorrelationGraph ring_graph(Index d, double r);
PartialCorrelationGraph one_many_one_graph(Index d, double r);
PartialCorrelationGraph example_r_graph(double r12, double r13, double r23, double r24, double r34);
PartialCorrelationGraph complete_graph(Index d, double r);

struct MartingaleSpec {
  Index horizon = 2;
  double alpha = 1.0;
  std::vector<double> innovation_variances;  // empty means all 1
};

CovarianceMatrix martingale_covariance(const MartingaleSpec& spec);

}  // namespace pathcorr
