#include "pathcorr/transforms.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "pathcorr/pathsum.hpp"

namespace pathcorr {

NodePartition make_partition(Index d, const NodeSet& removed) {
  check_node_set(d, removed, "removed set");
  NodePartition p;
  p.removed = removed;
  std::sort(p.removed.begin(), p.removed.end());
  p.kept = complement(d, p.removed);
  return p;
}

PartialCorrelationGraph sever_nodes(const PartialCorrelationGraph& g, const NodeSet& S) {
  const auto part = make_partition(g.dim(), S);
  if (part.kept.empty()) throw Error(ErrorCode::EmptyRemainder, "severing every node");
  if (part.removed.empty()) return g;
  return g.subgraph(part.kept);
}

PartialCorrelationGraph marginalize_nodes(const PartialCorrelationGraph& g, const NodeSet& S,
                                          MarginalizeMode mode) {
  const auto part = make_partition(g.dim(), S);
  const NodeSet& T = part.kept;
  const NodeSet& Sv = part.removed;
  if (T.empty()) throw Error(ErrorCode::EmptyRemainder, "marginalising every node");
  if (Sv.empty()) return g;
  std::vector<std::string> lab;
  for (Index t : T) lab.push_back(g.labels()[t]);

  if (mode == MarginalizeMode::Path) {
    const Mat& R = g.weights();
    const Index n = T.size();
    Vec loop(n);
    for (Index a = 0; a < n; ++a) loop[a] = restricted_sum_closed(R, T[a], T[a], Sv);
    Mat Rp = Mat::Zero(n, n);
    for (Index a = 0; a < n; ++a)
      for (Index b = a + 1; b < n; ++b) {
        const double den = (1.0 - loop[a]) * (1.0 - loop[b]);
        if (!(den > 0.0)) throw Error(ErrorCode::SingularBlock, "loop sum through S reached 1");
        Rp(a, b) = Rp(b, a) = restricted_sum_closed(R, T[a], T[b], Sv) / std::sqrt(den);
      }
    std::optional<Vec> sc;
    if (g.has_scale()) {
      // omega'_ii = lambda_i^2 (1 - loop_i)
      Vec s(n);
      for (Index a = 0; a < n; ++a) s[a] = (*g.scale())[T[a]] * std::sqrt(1.0 - loop[a]);
      sc = s;
    }
    return PartialCorrelationGraph(Rp, std::move(lab), std::move(sc));
  }

  const Index d = g.dim();
  const Mat W = g.has_scale() ? partial_to_precision(g).entries()
                              : Mat(Mat::Identity(d, d) - g.weights());
  const Mat WSS = submatrix(W, Sv, Sv);
  Eigen::LLT<Mat> llt(WSS);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularBlock, "Omega_S is not invertible");
  const Mat WST = submatrix(W, Sv, T);
  const Mat Wp = submatrix(W, T, T) - WST.transpose() * llt.solve(WST);
  auto out = precision_to_partial(PrecisionMatrix(Wp), lab);
  if (g.has_scale()) return out;
  return PartialCorrelationGraph(out.weights(), out.labels());
}

std::vector<NodeSet> connected_components(const Mat& R, const std::vector<char>& active, double edge_tol) {
  const Index d = R.rows();
  std::vector<char> seen(d, 0);
  std::vector<NodeSet> comps;
  for (Index s = 0; s < d; ++s) {
    if (!active[s] || seen[s]) continue;
    NodeSet comp{s}, stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const Index v = stack.back();
      stack.pop_back();
      for (Index u = 0; u < d; ++u)
        if (u != v && active[u] && !seen[u] && std::abs(R(v, u)) > edge_tol) {
          seen[u] = 1;
          comp.push_back(u);
          stack.push_back(u);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

namespace {

// smallest edge of a maximum spanning tree = min over cuts of the max crossing weight
double bottleneck(const Mat& w, const NodeSet& nodes) {
  const size_t n = nodes.size();
  if (n < 2) return std::numeric_limits<double>::infinity();
  std::vector<char> in(n, 0);
  std::vector<double> best(n, -1.0);
  in[0] = 1;
  for (size_t a = 1; a < n; ++a) best[a] = w(nodes[0], nodes[a]);
  double lo = std::numeric_limits<double>::infinity();
  for (size_t step = 1; step < n; ++step) {
    size_t pick = n;
    for (size_t a = 0; a < n; ++a)
      if (!in[a] && (pick == n || best[a] > best[pick])) pick = a;
    lo = std::min(lo, best[pick]);
    in[pick] = 1;
    for (size_t a = 0; a < n; ++a)
      if (!in[a]) best[a] = std::max(best[a], w(nodes[pick], nodes[a]));
  }
  return lo;
}

}  // namespace

std::vector<SeparatorReport> detect_separating_nodes(const PartialCorrelationGraph& g, double tol_fact, double edge_tol) {
  const Index d = g.dim();
  const Mat& R = g.weights();
  const Mat P = partial_to_marginal_oracle(g).entries();
  const auto whole = connected_components(R, std::vector<char>(d, 1), edge_tol);
  std::vector<Index> comp_of(d);
  for (size_t c = 0; c < whole.size(); ++c)
    for (Index v : whole[c]) comp_of[v] = c;

  std::vector<SeparatorReport> out;
  for (Index k = 0; k < d; ++k) {
    SeparatorReport rep;
    rep.node = k;
    std::vector<char> active(d, 0);
    NodeSet rest;
    for (Index v : whole[comp_of[k]])
      if (v != k) {
        active[v] = 1;
        rest.push_back(v);
      }
    rep.components = connected_components(R, active, edge_tol);
    rep.separating = rep.components.size() >= 2;
    if (rest.size() >= 2) {
      Mat res = Mat::Zero(d, d);
      for (Index a : rest)
        for (Index b : rest) res(a, b) = std::abs(P(a, b) - P(a, k) * P(k, b));
      rep.factorisation_residual = bottleneck(res, rest);
    }
    rep.factorises = rep.factorisation_residual < tol_fact;
    out.push_back(std::move(rep));
  }
  return out;
}

LatentReduction latent_reduce(const PartialCorrelationGraph& g, const NodeSet& S, double rank_tol) {
  const auto part = make_partition(g.dim(), S);
  const NodeSet& T = part.kept;
  const NodeSet& Sv = part.removed;
  if (T.empty()) throw Error(ErrorCode::EmptyRemainder, "latent reduction needs kept nodes");
  const Mat& R = g.weights();
  const Index dS = Sv.size(), dT = T.size(), d = g.dim();

  Index mu = 0;
  Mat A(dS, 0), B(dT, 0);
  Vec s(0);
  if (dS > 0) {
    const Mat Q = submatrix(R, Sv, T);
    Eigen::JacobiSVD<Mat> svd(Q, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vec& sv = svd.singularValues();
    const double smax = sv.size() ? sv[0] : 0.0;
    if (smax > 0.0)
      for (Index u = 0; u < sv.size(); ++u)
        if (sv[u] >= rank_tol * smax) ++mu;
    A = svd.matrixU().leftCols(mu);
    B = svd.matrixV().leftCols(mu);
    s = sv.head(mu);
    for (Index u = 0; u < mu; ++u) {
      Index at;
      A.col(u).cwiseAbs().maxCoeff(&at);
      if (A(at, u) < 0.0) {
        A.col(u) *= -1.0;
        B.col(u) *= -1.0;
      }
    }
  }

  LatentReduction red{T, Sv, mu, {}, {}, {}, g, g};
  red.singular_values.assign(s.data(), s.data() + mu);

  // sigma_u^2 is the SVD value s_u
  auto tilde = [&](const Mat& V) {
    Mat out(V.rows(), mu);
    for (Index i = 0; i < V.rows(); ++i) {
      double den = 1.0;
      for (Index v = 0; v < mu; ++v) den += s[v] * V(i, v) * V(i, v);
      den = std::sqrt(den);
      for (Index u = 0; u < mu; ++u) out(i, u) = std::sqrt(s[u]) * V(i, u) / den;
    }
    return out;
  };
  const Mat At = tilde(A), Bt = tilde(B);
  for (Index u = 0; u < mu; ++u) {
    red.a_tilde.push_back(At.col(u));
    red.b_tilde.push_back(Bt.col(u));
  }

  std::vector<std::string> ylab;
  for (Index u = 0; u < mu; ++u) {
    std::string l = "Y" + std::to_string(u + 1);
    while (std::find(g.labels().begin(), g.labels().end(), l) != g.labels().end()) l = "_" + l;
    ylab.push_back(l);
  }

  // enlarged graph: no S-T edges, latents unlinked, within-block weights compensated
  {
    Mat C = Mat::Zero(d, mu);
    for (Index a = 0; a < dS; ++a) C.row(Sv[a]) = At.row(a);
    for (Index b = 0; b < dT; ++b) C.row(T[b]) = Bt.row(b);
    const Vec D = (Vec::Ones(d) - C.rowwise().squaredNorm()).cwiseSqrt();
    std::vector<char> inS(d, 0);
    for (Index v : Sv) inS[v] = 1;
    Mat E = Mat::Zero(d + mu, d + mu);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j)
        if (i != j && inS[i] == inS[j]) E(i, j) = D[i] * D[j] * R(i, j) - C.row(i).dot(C.row(j));
    E.topRightCorner(d, mu) = C;
    E.bottomLeftCorner(mu, d) = C.transpose();
    auto lab = g.labels();
    lab.insert(lab.end(), ylab.begin(), ylab.end());
    red.enlarged_graph = PartialCorrelationGraph(E, lab);
  }

  // reduced model over T u Y
  {
    Mat F = Mat::Zero(dT, mu);
    if (mu > 0) {
      const Mat M = Mat::Identity(dS, dS) - submatrix(R, Sv, Sv);
      Eigen::LLT<Mat> lm(M);
      if (lm.info() != Eigen::Success) throw Error(ErrorCode::SingularBlock, "1 - R_S is not invertible");
      const Mat G = A.transpose() * lm.solve(A);
      Eigen::LLT<Mat> lg(G);
      if (lg.info() != Eigen::Success) throw Error(ErrorCode::SingularBlock, "latent Gram matrix singular");
      F = B * s.asDiagonal() * Mat(lg.matrixL());
    }
    Mat Rr = Mat::Zero(dT + mu, dT + mu);
    Rr.topLeftCorner(dT, dT) = submatrix(R, T, T);
    Rr.topRightCorner(dT, mu) = F;
    Rr.bottomLeftCorner(mu, dT) = F.transpose();
    std::vector<std::string> lab;
    for (Index t : T) lab.push_back(g.labels()[t]);
    lab.insert(lab.end(), ylab.begin(), ylab.end());
    red.reduced_graph = PartialCorrelationGraph(Rr, lab);
  }
  return red;
}

ReductionResidual verify_reduction(const PartialCorrelationGraph& original, const NodeSet& kept,
                                   const PartialCorrelationGraph& reduced) {
  check_node_set(original.dim(), kept, "kept set");
  const Index n = kept.size();
  if (reduced.dim() < n) throw Error(ErrorCode::DimensionMismatch, "reduced graph smaller than kept set");
  ReductionResidual res;
  const Mat P0 = partial_to_marginal_oracle(original).entries();
  const Mat P1 = partial_to_marginal_oracle(reduced).entries();
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      res.partial = std::max(res.partial, std::abs(original(kept[a], kept[b]) - reduced(a, b)));
      res.marginal = std::max(res.marginal, std::abs(P0(kept[a], kept[b]) - P1(a, b)));
    }
  return res;
}

ReductionResidual verify_reduction(const PartialCorrelationGraph& original, const LatentReduction& red) {
  if (red.reduced_graph.dim() != static_cast<Index>(red.kept.size()) + red.latent_count)
    throw Error(ErrorCode::DimensionMismatch, "reduced graph size differs from |T| + mu");
  return verify_reduction(original, red.kept, red.reduced_graph);
}

}  // namespace pathcorr
