#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pathcorr/matrices.hpp"

namespace pathcorr {

// Walk family from source to target. Endpoints are exempt from both sets:
// the constraints apply to interior vertices only.
struct PathQuery {
  Index source = 0;
  Index target = 0;
  NodeSet interior_forbidden;
  std::optional<NodeSet> interior_allowed;
  int max_length = 1;  // edges
  bool allow_self_loops = false;
};

struct Path {
  std::vector<Index> vertices;
  double weight = 1.0;
  int length() const { return static_cast<int>(vertices.size()) - 1; }
};

// per_length[l] and cumulative[l] for l = 0..L; index 0 is always 0
struct PathSumResult {
  std::vector<double> per_length;
  std::vector<double> cumulative;
  int truncation_length = 0;
  std::optional<double> converged_estimate;
  double total() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
};

// R(q) = (1-q) 1 + q R
class RescaledGraph {
 public:
  RescaledGraph(const PartialCorrelationGraph& base, double q);
  const PartialCorrelationGraph& base() const { return base_; }
  double q() const { return q_; }
  const Mat& weights() const { return w_; }
  Index dim() const { return w_.rows(); }

 private:
  PartialCorrelationGraph base_;
  double q_;
  Mat w_;
};

double rescale_upper_bound(const PartialCorrelationGraph& g);
RescaledGraph rescale(const PartialCorrelationGraph& g, std::optional<double> q = std::nullopt);

// raw-weight engine; W may carry a diagonal (used only if allow_self_loops)
void enumerate_paths(const Mat& W, const PathQuery& query, const std::function<void(const Path&)>& visit);
std::vector<Path> enumerate_paths(const PartialCorrelationGraph& g, const PathQuery& query);
std::vector<Path> enumerate_paths(const RescaledGraph& g, const PathQuery& query);
PathSumResult path_sum_truncated(const Mat& W, const PathQuery& query);

// s -> t through interiors in A only: W_st + W_sA (1 - W_AA)^-1 W_At
double restricted_sum_closed(const Mat& W, Index s, Index t, const NodeSet& interior);

// ij*-paths (i, j only at the ends). i == j gives closed star loops at i.
PathSumResult star_path_sum_truncated(const PartialCorrelationGraph& g, Index i, Index j, int L);
PathSumResult star_path_sum_truncated(const RescaledGraph& g, Index i, Index j, int L);
// closed walks at i avoiding j and i in the interior
PathSumResult loop_sum_truncated(const PartialCorrelationGraph& g, Index i, Index j, int L);
PathSumResult loop_sum_truncated(const RescaledGraph& g, Index i, Index j, int L);

double star_path_sum_closed(const PartialCorrelationGraph& g, Index i, Index j);
double star_path_sum_closed(const RescaledGraph& g, Index i, Index j);
double loop_sum_closed(const PartialCorrelationGraph& g, Index i, Index j);
double loop_sum_closed(const RescaledGraph& g, Index i, Index j);

// Requires nu(R) < 1 (or a rescaled graph); not checked here.
double marginal_corr_expansion(const PartialCorrelationGraph& g, Index i, Index j, int L);
double marginal_corr_expansion(const RescaledGraph& g, Index i, Index j, int L);
double marginal_corr_closed(const PartialCorrelationGraph& g, Index i, Index j);
double marginal_corr_closed(const RescaledGraph& g, Index i, Index j);

struct ProfileRow {
  int L = 0;
  double rho_hat = 0.0;
  double abs_gap = 0.0;
};

std::vector<ProfileRow> convergence_profile(const PartialCorrelationGraph& g, Index i, Index j, int L_max);
std::vector<ProfileRow> convergence_profile(const RescaledGraph& g, Index i, Index j, int L_max);
std::string profile_csv(const std::vector<ProfileRow>& rows);

}  // namespace pathcorr
