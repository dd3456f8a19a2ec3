#pragma once

#include <limits>
#include <vector>

#include "pathcorr/matrices.hpp"

namespace pathcorr {

struct NodePartition {
  NodeSet kept;
  NodeSet removed;
};

NodePartition make_partition(Index d, const NodeSet& removed);

PartialCorrelationGraph sever_nodes(const PartialCorrelationGraph& g, const NodeSet& S);

enum class MarginalizeMode { Block, Path };
PartialCorrelationGraph marginalize_nodes(const PartialCorrelationGraph& g, const NodeSet& S,
                                          MarginalizeMode mode = MarginalizeMode::Block);

struct SeparatorReport {
  Index node = 0;
  bool separating = false;           // removal splits its connected component
  std::vector<NodeSet> components;  // of the component minus the node
  // min over bipartitions of (component minus node) of max |rho_ij - rho_ik rho_kj| across;
  // +inf when fewer than two other nodes
  double factorisation_residual = std::numeric_limits<double>::infinity();
  bool factorises = false;  // residual < tol
};

// |r| <= edge_tol counts as no edge, so round-off from inverted covariances does not join components
std::vector<SeparatorReport> detect_separating_nodes(const PartialCorrelationGraph& g, double tol_fact = 1e-9,
                                                     double edge_tol = 1e-12);
std::vector<NodeSet> connected_components(const Mat& R, const std::vector<char>& active, double edge_tol = 0.0);

struct LatentReduction {
  NodeSet kept;     // T, indices in the original graph
  NodeSet removed;  // S
  Index latent_count = 0;
  std::vector<Vec> a_tilde;  // over S
  std::vector<Vec> b_tilde;  // over T
  std::vector<double> singular_values;
  PartialCorrelationGraph reduced_graph;   // T then Y_1..Y_mu
  PartialCorrelationGraph enlarged_graph;  // original nodes then Y_1..Y_mu
};

LatentReduction latent_reduce(const PartialCorrelationGraph& g, const NodeSet& S, double rank_tol = 1e-10);

struct ReductionResidual {
  double partial = 0.0;
  double marginal = 0.0;
};

ReductionResidual verify_reduction(const PartialCorrelationGraph& original, const LatentReduction& red);
// same check with an arbitrary reduced graph whose first |kept| nodes stand for kept
ReductionResidual verify_reduction(const PartialCorrelationGraph& original, const NodeSet& kept,
                                   const PartialCorrelationGraph& reduced);

}  // namespace pathcorr
