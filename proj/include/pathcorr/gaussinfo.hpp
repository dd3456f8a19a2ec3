#pragma once

#include <optional>
#include <vector>

#include "pathcorr/matrices.hpp"

namespace pathcorr {

struct TriPartition {
  NodeSet A, B, Z;
};

void validate_partition(Index d, const TriPartition& part);

enum class InfoMethod { Closed, TraceSeries };
const char* method_name(InfoMethod m) noexcept;

struct InfoResult {
  double nats = 0.0;
  InfoMethod method = InfoMethod::Closed;
  std::vector<double> series_terms;   // tr(T^n)/(2n), n = 1..
  std::optional<double> q;            // set for the rescaled series
  std::optional<double> cross_check;  // entropy-difference value (closed form only)
  double bits() const;
};

// T_ABA = R_AB (1 - R_BB)^-1 R_BA (1 - R_AA)^-1, the conditioning on Z being implicit
Mat t_aba(const PartialCorrelationGraph& g, const TriPartition& part);

InfoResult conditional_mi_closed(const PartialCorrelationGraph& g, const TriPartition& part);
InfoResult conditional_mi_closed(const PrecisionMatrix& W, const TriPartition& part);
// 1/2 ln[det C_{A|Z} / det C_{A|B,Z}] from covariance blocks
double conditional_mi_entropy(const PartialCorrelationGraph& g, const TriPartition& part);

// q unset: plain series, SpectralRadiusTooLarge if nu(T) >= 1.
// q set: rescaled series with T(q) = (1-q) 1 + q T, 0 < q < 2/(1 + nu(T)).
InfoResult conditional_mi_series(const PartialCorrelationGraph& g, const TriPartition& part, int n_max = 1000,
                                 std::optional<double> q = std::nullopt);
double t_aba_rescale_bound(const PartialCorrelationGraph& g, const TriPartition& part);

struct LoopInfo {
  double loop_sum = 0.0;
  double mi = 0.0;
  double residual = 0.0;  // |loop - (1 - exp(-2 mi))|
};

LoopInfo loop_sum_mi_identity(const PartialCorrelationGraph& g, Index i, Index j);

}  // namespace pathcorr
