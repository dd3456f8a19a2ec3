#include "pathcorr/pathsum.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace pathcorr {

namespace {

constexpr double kLoopGuard = 1e-12;

std::vector<char> interior_mask(Index d, const PathQuery& q) {
  std::vector<char> ok(d, 1);
  if (q.interior_allowed) {
    check_node_set(d, *q.interior_allowed, "interior_allowed");
    std::fill(ok.begin(), ok.end(), 0);
    for (Index k : *q.interior_allowed) ok[k] = 1;
  }
  check_node_set(d, q.interior_forbidden, "interior_forbidden");
  for (Index k : q.interior_forbidden) ok[k] = 0;
  return ok;
}

void check_query(Index d, const PathQuery& q) {
  if (q.source < 0 || q.source >= d || q.target < 0 || q.target >= d)
    throw Error(ErrorCode::IndexOutOfRange, "path endpoint out of range");
  if (q.max_length < 0) throw Error(ErrorCode::InvalidArgument, "negative max_length");
}

Mat effective(const Mat& W, bool loops) {
  if (loops) return W;
  Mat out = W;
  out.diagonal().setZero();
  return out;
}

NodeSet all_but(Index d, Index a, Index b) {
  NodeSet out;
  for (Index k = 0; k < d; ++k)
    if (k != a && k != b) out.push_back(k);
  return out;
}

PathSumResult star_sum(const Mat& W, bool loops, Index i, Index j, int L) {
  PathQuery q;
  q.source = i;
  q.target = j;
  q.interior_forbidden = i == j ? NodeSet{i} : NodeSet{i, j};
  q.max_length = L;
  q.allow_self_loops = loops;
  return path_sum_truncated(W, q);
}

PathSumResult loop_sum(const Mat& W, bool loops, Index i, Index j, int L) {
  PathQuery q;
  q.source = i;
  q.target = i;
  q.interior_forbidden = i == j ? NodeSet{i} : NodeSet{i, j};
  q.max_length = L;
  q.allow_self_loops = loops;
  return path_sum_truncated(W, q);
}

double star_closed(const Mat& W, Index i, Index j) {
  return restricted_sum_closed(W, i, j, i == j ? all_but(W.rows(), i, i) : all_but(W.rows(), i, j));
}

double loop_closed(const Mat& W, Index i, Index j) {
  return restricted_sum_closed(W, i, i, all_but(W.rows(), i, j));
}

void check_pair(Index d, Index i, Index j) {
  if (i < 0 || i >= d || j < 0 || j >= d) throw Error(ErrorCode::IndexOutOfRange, "node index out of range");
}

double ratio(double star, double li, double lj) {
  if (li >= 1.0 - kLoopGuard || lj >= 1.0 - kLoopGuard)
    throw Error(ErrorCode::DenominatorNonPositive,
                "loop sum reached 1 (truncation too short or nu(R) >= 1 without rescaling)");
  return star / std::sqrt((1.0 - li) * (1.0 - lj));
}

double expansion(const Mat& W, bool loops, Index i, Index j, int L) {
  check_pair(W.rows(), i, j);
  if (i == j) return 1.0;
  const double s = star_sum(W, loops, i, j, L).total();
  const double li = loop_sum(W, loops, i, j, L).total();
  const double lj = loop_sum(W, loops, j, i, L).total();
  return ratio(s, li, lj);
}

double closed(const Mat& W, Index i, Index j) {
  check_pair(W.rows(), i, j);
  if (i == j) return 1.0;
  return ratio(star_closed(W, i, j), loop_closed(W, i, j), loop_closed(W, j, i));
}

std::vector<ProfileRow> profile(const Mat& W, bool loops, const PartialCorrelationGraph& base, Index i,
                                Index j, int L_max) {
  check_pair(W.rows(), i, j);
  if (L_max < 1) throw Error(ErrorCode::InvalidArgument, "L_max must be at least 1");
  const double oracle = partial_to_marginal_oracle(base)(i, j);
  std::vector<ProfileRow> rows;
  if (i == j) {
    for (int L = 1; L <= L_max; ++L) rows.push_back({L, 1.0, 0.0});
    return rows;
  }
  const auto s = star_sum(W, loops, i, j, L_max);
  const auto li = loop_sum(W, loops, i, j, L_max);
  const auto lj = loop_sum(W, loops, j, i, L_max);
  for (int L = 1; L <= L_max; ++L) {
    const double est = ratio(s.cumulative[L], li.cumulative[L], lj.cumulative[L]);
    rows.push_back({L, est, std::abs(est - oracle)});
  }
  return rows;
}

}  // namespace

RescaledGraph::RescaledGraph(const PartialCorrelationGraph& base, double q) : base_(base), q_(q) {
  const double bound = rescale_upper_bound(base);
  if (!(q > 0.0 && q < bound))
    throw Error(ErrorCode::QOutOfRange, "q must lie in (0, " + std::to_string(bound) + ")");
  const Index d = base.dim();
  w_ = (1.0 - q) * Mat::Identity(d, d) + q * base.weights();
}

double rescale_upper_bound(const PartialCorrelationGraph& g) {
  return 2.0 / (1.0 + spectral_radius_sym(g.weights()));
}

RescaledGraph rescale(const PartialCorrelationGraph& g, std::optional<double> q) {
  return RescaledGraph(g, q ? *q : 0.95 * rescale_upper_bound(g));
}

void enumerate_paths(const Mat& W, const PathQuery& query, const std::function<void(const Path&)>& visit) {
  const Index d = W.rows();
  check_query(d, query);
  const auto ok = interior_mask(d, query);
  const Mat E = effective(W, query.allow_self_loops);

  std::vector<std::vector<Index>> nbr(d);
  for (Index v = 0; v < d; ++v)
    for (Index u = 0; u < d; ++u)
      if (E(v, u) != 0.0) nbr[v].push_back(u);

  Path p;
  for (int len = 1; len <= query.max_length; ++len) {
    // depth-first over walks of exactly len edges; neighbour lists are sorted
    std::vector<Index> verts{query.source};
    std::vector<double> wts{1.0};
    std::vector<size_t> cursor{0};
    while (!cursor.empty()) {
      const size_t depth = cursor.size() - 1;
      const Index v = verts[depth];
      if (static_cast<int>(depth) == len) {
        if (v == query.target) {
          p.vertices = verts;
          p.weight = wts[depth];
          visit(p);
        }
        cursor.pop_back();
        verts.pop_back();
        wts.pop_back();
        continue;
      }
      size_t& c = cursor[depth];
      bool pushed = false;
      while (c < nbr[v].size()) {
        const Index u = nbr[v][c++];
        const int pos = static_cast<int>(depth) + 1;
        if (pos < len ? !ok[u] : u != query.target) continue;
        verts.push_back(u);
        wts.push_back(wts[depth] * E(v, u));
        cursor.push_back(0);
        pushed = true;
        break;
      }
      if (!pushed) {
        cursor.pop_back();
        verts.pop_back();
        wts.pop_back();
      }
    }
  }
}

std::vector<Path> enumerate_paths(const PartialCorrelationGraph& g, const PathQuery& query) {
  PathQuery q = query;
  q.allow_self_loops = false;
  std::vector<Path> out;
  enumerate_paths(g.weights(), q, [&](const Path& p) { out.push_back(p); });
  return out;
}

std::vector<Path> enumerate_paths(const RescaledGraph& g, const PathQuery& query) {
  std::vector<Path> out;
  enumerate_paths(g.weights(), query, [&](const Path& p) { out.push_back(p); });
  return out;
}

PathSumResult path_sum_truncated(const Mat& W, const PathQuery& query) {
  const Index d = W.rows();
  check_query(d, query);
  const auto ok = interior_mask(d, query);
  const Mat E = effective(W, query.allow_self_loops);
  NodeSet A;
  for (Index k = 0; k < d; ++k)
    if (ok[k]) A.push_back(k);

  const int L = query.max_length;
  PathSumResult res;
  res.truncation_length = L;
  res.per_length.assign(L + 1, 0.0);
  res.cumulative.assign(L + 1, 0.0);
  if (L >= 1) res.per_length[1] = E(query.source, query.target);
  if (L >= 2 && !A.empty()) {
    const Mat WAA = submatrix(E, A, A);
    Vec x(A.size()), out(A.size());
    for (size_t a = 0; a < A.size(); ++a) {
      x[a] = E(A[a], query.source);
      out[a] = E(query.target, A[a]);
    }
    for (int l = 2; l <= L; ++l) {
      res.per_length[l] = out.dot(x);
      if (l < L) x = WAA * x;
    }
  }
  for (int l = 1; l <= L; ++l) res.cumulative[l] = res.cumulative[l - 1] + res.per_length[l];
  return res;
}

double restricted_sum_closed(const Mat& W, Index s, Index t, const NodeSet& interior) {
  const Index d = W.rows();
  check_pair(d, s, t);
  check_node_set(d, interior, "interior set");
  double v = W(s, t);
  if (interior.empty()) return v;
  const Index n = static_cast<Index>(interior.size());
  const Mat M = Mat::Identity(n, n) - submatrix(W, interior, interior);
  Vec a(n), b(n);
  for (Index k = 0; k < n; ++k) {
    a[k] = W(s, interior[k]);
    b[k] = W(interior[k], t);
  }
  Eigen::LLT<Mat> llt(M);
  if (llt.info() == Eigen::Success) return v + a.dot(llt.solve(b));
  Eigen::FullPivLU<Mat> lu(M);
  if (!lu.isInvertible()) throw Error(ErrorCode::SingularRestrictedBlock, "1 - R_K is singular");
  return v + a.dot(lu.solve(b));
}

PathSumResult star_path_sum_truncated(const PartialCorrelationGraph& g, Index i, Index j, int L) {
  auto r = star_sum(g.weights(), false, i, j, L);
  r.converged_estimate = star_closed(g.weights(), i, j);
  return r;
}

PathSumResult star_path_sum_truncated(const RescaledGraph& g, Index i, Index j, int L) {
  auto r = star_sum(g.weights(), true, i, j, L);
  r.converged_estimate = star_closed(g.weights(), i, j);
  return r;
}

PathSumResult loop_sum_truncated(const PartialCorrelationGraph& g, Index i, Index j, int L) {
  auto r = loop_sum(g.weights(), false, i, j, L);
  r.converged_estimate = loop_closed(g.weights(), i, j);
  return r;
}

PathSumResult loop_sum_truncated(const RescaledGraph& g, Index i, Index j, int L) {
  auto r = loop_sum(g.weights(), true, i, j, L);
  r.converged_estimate = loop_closed(g.weights(), i, j);
  return r;
}

double star_path_sum_closed(const PartialCorrelationGraph& g, Index i, Index j) {
  check_pair(g.dim(), i, j);
  return star_closed(g.weights(), i, j);
}

double star_path_sum_closed(const RescaledGraph& g, Index i, Index j) {
  check_pair(g.dim(), i, j);
  return star_closed(g.weights(), i, j);
}

double loop_sum_closed(const PartialCorrelationGraph& g, Index i, Index j) {
  check_pair(g.dim(), i, j);
  return loop_closed(g.weights(), i, j);
}

double loop_sum_closed(const RescaledGraph& g, Index i, Index j) {
  check_pair(g.dim(), i, j);
  return loop_closed(g.weights(), i, j);
}

double marginal_corr_expansion(const PartialCorrelationGraph& g, Index i, Index j, int L) {
  return expansion(g.weights(), false, i, j, L);
}

double marginal_corr_expansion(const RescaledGraph& g, Index i, Index j, int L) {
  return expansion(g.weights(), true, i, j, L);
}

double marginal_corr_closed(const PartialCorrelationGraph& g, Index i, Index j) {
  return closed(g.weights(), i, j);
}

double marginal_corr_closed(const RescaledGraph& g, Index i, Index j) { return closed(g.weights(), i, j); }

std::vector<ProfileRow> convergence_profile(const PartialCorrelationGraph& g, Index i, Index j, int L_max) {
  return profile(g.weights(), false, g, i, j, L_max);
}

std::vector<ProfileRow> convergence_profile(const RescaledGraph& g, Index i, Index j, int L_max) {
  return profile(g.weights(), true, g.base(), i, j, L_max);
}

std::string profile_csv(const std::vector<ProfileRow>& rows) {
  std::ostringstream os;
  os << "L,rho_hat,abs_gap\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", r.L, r.rho_hat, r.abs_gap);
    os << buf;
  }
  return os.str();
}

}  // namespace pathcorr
