#include "pathcorr/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

#include "pathcorr/chains.hpp"
#include "pathcorr/gaussinfo.hpp"
#include "pathcorr/matrix_io.hpp"
#include "pathcorr/pathsum.hpp"
#include "pathcorr/sampling.hpp"
#include "pathcorr/transforms.hpp"

namespace pathcorr::cli {

using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Input {
  std::string path;
  std::string as;
};

void add_input(CLI::App* sub, Input& in) {
  sub->add_option("--in", in.path, "matrix file (JSON, or CSV with --as)")->required();
  sub->add_option("--as", in.as, "kind of a CSV input")
      ->check(CLI::IsMember({"covariance", "precision", "partial", "marginal"}));
}

MatrixFile load(const Input& in) {
  std::optional<MatrixKind> k;
  if (!in.as.empty()) k = kind_from(in.as);
  return read_matrix(in.path, k);
}

// data to --out when given, else to stdout
void emit(const std::string& out_path, const std::string& data, std::ostream& out) {
  if (out_path.empty())
    out << data;
  else
    write_text(out_path, data);
}

json labels_json(const PartialCorrelationGraph& g, const NodeSet& s) {
  json a = json::array();
  for (Index k : s) a.push_back(g.labels()[k]);
  return a;
}

json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

std::string gamma_table(int k, int m_max, const std::vector<double>& rs) {
  std::ostringstream os;
  os << "abs_r,k,m,gamma\n";
  for (double r : rs)
    for (int m = 0; m <= m_max; ++m)
      os << num(r) << ',' << k << ',' << m << ',' << num(amplification_factor(k, m, r)) << '\n';
  return os.str();
}

}  // namespace

std::vector<std::string> split_labels(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    const auto a = tok.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    const auto b = tok.find_last_not_of(" \t");
    out.push_back(tok.substr(a, b - a + 1));
  }
  return out;
}

std::vector<std::pair<Index, Index>> study_pairs(Index d) {
  if (d < 4) throw Error(ErrorCode::ParamOutOfBound, "study pairs need d >= 4");
  return {{0, 1}, {std::max<Index>(d / 10 - 1, 0), d / 2 - 1}, {d - 2, d - 1}};
}

std::vector<double> fig4_r_grid() { return {0.1, 0.2, 0.3, 0.4, 0.45, 0.47, 0.49}; }
std::vector<double> fig6_q_grid() { return {0.2, 0.4, 0.6, 0.8, 1.0}; }

FigureKind figure_kind_from(const std::string& s) {
  if (s == "fig4") return FigureKind::Fig4;
  if (s == "fig5") return FigureKind::Fig5;
  if (s == "fig6") return FigureKind::Fig6;
  throw Error(ErrorCode::InvalidArgument, "unknown figure '" + s + "'");
}

std::string figure_data(FigureKind kind, const FigureParams& p) {
  if (kind == FigureKind::Fig4) return gamma_table(p.k, p.m_max, fig4_r_grid());

  const auto samples = unflagged_samples(p.d, p.n, p.seed, 3);
  const auto pairs = study_pairs(p.d);
  std::ostringstream os;
  if (kind == FigureKind::Fig5) {
    const int L = p.L_max > 0 ? p.L_max : 10;
    os << "seed,i,j,L,rho_hat,oracle,abs_gap\n";
    for (size_t s = 0; s < samples.size(); ++s) {
      const auto& g = samples[s].sample.graph;
      const auto [i, j] = pairs[s];
      const double oracle = partial_to_marginal_oracle(g)(i, j);
      for (const auto& row : convergence_profile(g, i, j, L))
        os << samples[s].seed << ',' << g.labels()[i] << ',' << g.labels()[j] << ',' << row.L << ','
           << num(row.rho_hat) << ',' << num(oracle) << ',' << num(row.abs_gap) << '\n';
    }
    return os.str();
  }

  const int L = p.L_max > 0 ? p.L_max : 30;
  const auto& g = samples[0].sample.graph;
  const auto [i, j] = pairs[0];
  os << "q,L,rho_hat,abs_gap\n";
  for (double q : fig6_q_grid())
    for (const auto& row : convergence_profile(rescale(g, q), i, j, L))
      os << num(q) << ',' << row.L << ',' << num(row.rho_hat) << ',' << num(row.abs_gap) << '\n';
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"pathcorr: marginal correlations as sums over partial-correlation paths", "pathcorr"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string out_path;
  Input in;
  std::string to, si, sj, sS, mode = "block", kind, pairs = "all", table = "pairs", sA, sB, sZ;
  std::string method = "closed", weights;
  int L = 0, Lmax = 0, k = 10, m = 10, nmax = 1000;
  Index d = 0, n = 0;
  double r = 0.0, alpha = 1.0, tol = -1.0;
  std::optional<double> q;
  std::uint64_t seed = 0;
  bool do_rescale = false;

  auto out_opt = [&](CLI::App* s) { s->add_option("--out", out_path, "output file (default stdout)"); };
  auto q_opts = [&](CLI::App* s) {
    auto* qo = s->add_option("--q", q, "rescaling parameter q");
    s->add_flag("--rescale", do_rescale, "rescale with the default q")->excludes(qo);
  };

  auto* c_convert = app.add_subcommand("convert", "convert between covariance, precision, partial, marginal");
  add_input(c_convert, in);
  c_convert->add_option("--to", to, "target kind")
      ->required()
      ->check(CLI::IsMember({"covariance", "precision", "partial", "marginal"}));
  out_opt(c_convert);

  auto* c_expand = app.add_subcommand("expand", "truncated path expansion of one marginal correlation");
  add_input(c_expand, in);
  c_expand->add_option("--i", si, "first node label")->required();
  c_expand->add_option("--j", sj, "second node label")->required();
  c_expand->add_option("--L", L, "maximum path length")->required()->check(CLI::PositiveNumber);
  q_opts(c_expand);
  out_opt(c_expand);

  auto* c_profile = app.add_subcommand("profile", "convergence profile L, rho_hat, gap (CSV)");
  add_input(c_profile, in);
  c_profile->add_option("--i", si)->required();
  c_profile->add_option("--j", sj)->required();
  c_profile->add_option("--Lmax", Lmax)->required()->check(CLI::PositiveNumber);
  q_opts(c_profile);
  out_opt(c_profile);

  auto* c_sever = app.add_subcommand("sever", "delete nodes keeping remaining partial correlations");
  add_input(c_sever, in);
  c_sever->add_option("--S", sS, "comma-separated labels")->required();
  out_opt(c_sever);

  auto* c_marg = app.add_subcommand("marginalize", "marginalise nodes out");
  add_input(c_marg, in);
  c_marg->add_option("--S", sS)->required();
  c_marg->add_option("--mode", mode)->check(CLI::IsMember({"block", "path"}));
  out_opt(c_marg);

  auto* c_reduce = app.add_subcommand("reduce", "minimal latent-variable equivalent model");
  add_input(c_reduce, in);
  c_reduce->add_option("--S", sS)->required();
  c_reduce->add_option("--tol", tol, "relative rank threshold (default 1e-10)");
  out_opt(c_reduce);

  auto* c_sep = app.add_subcommand("separators", "separating nodes and factorisation residuals");
  add_input(c_sep, in);
  c_sep->add_option("--tol", tol, "factorisation tolerance (default 1e-9)");
  out_opt(c_sep);

  auto* c_chain = app.add_subcommand("chain", "homogeneous chain tables (CSV)");
  c_chain->add_option("--d", d, "chain length");
  c_chain->add_option("--r", r, "link weight")->required();
  c_chain->add_option("--pairs", pairs)->check(CLI::IsMember({"all", "endpoints"}));
  c_chain->add_option("--table", table)->check(CLI::IsMember({"pairs", "gamma"}));
  c_chain->add_option("--k", k, "appended chain length for gamma");
  c_chain->add_option("--m", m, "largest m for gamma");
  out_opt(c_chain);

  auto* c_mi = app.add_subcommand("mi", "Gaussian conditional mutual information I(A;B|Z)");
  add_input(c_mi, in);
  c_mi->add_option("--A", sA)->required();
  c_mi->add_option("--B", sB)->required();
  c_mi->add_option("--Z", sZ, "default: every other node");
  c_mi->add_option("--method", method)->check(CLI::IsMember({"closed", "series"}));
  c_mi->add_option("--nmax", nmax)->check(CLI::PositiveNumber);
  c_mi->add_option("--q", q, "rescaled series parameter");
  out_opt(c_mi);

  auto* c_sample = app.add_subcommand("sample", "generate a test system (matrix JSON with provenance)");
  c_sample->add_option("--kind", kind)
      ->required()
      ->check(CLI::IsMember({"random", "chain", "ring", "one_many_one", "example_R", "complete", "martingale"}));
  c_sample->add_option("--d", d);
  c_sample->add_option("--n", n);
  c_sample->add_option("--seed", seed);
  c_sample->add_option("--r", r);
  c_sample->add_option("--alpha", alpha);
  c_sample->add_option("--weights", weights, "r12,r13,r23,r24,r34 for example_R");
  out_opt(c_sample);

  auto* c_fig = app.add_subcommand("figure", "figure data tables (CSV)");
  FigureParams fp;
  std::string fig;
  c_fig->add_option("--kind", fig)->required()->check(CLI::IsMember({"fig4", "fig5", "fig6"}));
  c_fig->add_option("--k", fp.k);
  c_fig->add_option("--m", fp.m_max);
  c_fig->add_option("--d", fp.d);
  c_fig->add_option("--n", fp.n);
  c_fig->add_option("--seed", fp.seed);
  c_fig->add_option("--Lmax", fp.L_max);
  out_opt(c_fig);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (c_convert->parsed()) {
      const auto mf = load(in);
      auto res = convert(mf, kind_from(to));
      res.provenance = mf.provenance;
      emit(out_path, dump(matrix_json(res)), out);
      if (!out_path.empty()) out << "converted " << kind_name(mf.kind) << " -> " << to << " (dim " << res.data.rows() << ")\n";
      return 0;
    }

    auto graph_of = [&]() { return to_graph(load(in)); };
    auto pick_q = [&](const PartialCorrelationGraph& g) -> std::optional<RescaledGraph> {
      if (q) return rescale(g, *q);
      if (do_rescale) return rescale(g);
      if (spectral_radius_sym(g.weights()) >= 1.0)
        throw Error(ErrorCode::SpectralRadiusTooLarge, "nu(R) >= 1: pass --q or --rescale");
      return std::nullopt;
    };

    if (c_expand->parsed()) {
      const auto g = graph_of();
      const Index i = g.index_of(si), j = g.index_of(sj);
      const auto rg = pick_q(g);
      PathSumResult st, li, lj;
      double est, clo;
      if (rg) {
        st = star_path_sum_truncated(*rg, i, j, L);
        li = loop_sum_truncated(*rg, i, j, L);
        lj = loop_sum_truncated(*rg, j, i, L);
        est = marginal_corr_expansion(*rg, i, j, L);
        clo = marginal_corr_closed(*rg, i, j);
      } else {
        st = star_path_sum_truncated(g, i, j, L);
        li = loop_sum_truncated(g, i, j, L);
        lj = loop_sum_truncated(g, j, i, L);
        est = marginal_corr_expansion(g, i, j, L);
        clo = marginal_corr_closed(g, i, j);
      }
      const double oracle = partial_to_marginal_oracle(g)(i, j);
      json o;
      o["i"] = si;
      o["j"] = sj;
      o["L"] = L;
      if (rg) o["q"] = rg->q();
      o["rho_hat"] = est;
      o["rho_closed"] = clo;
      o["rho_oracle"] = oracle;
      o["abs_gap"] = std::abs(est - oracle);
      o["star_sum"] = st.total();
      o["loop_i"] = li.total();
      o["loop_j"] = lj.total();
      o["per_length"] = {{"star", st.per_length}, {"loop_i", li.per_length}, {"loop_j", lj.per_length}};
      emit(out_path, dump(o), out);
      if (!out_path.empty())
        out << "rho_hat(L=" << L << ") = " << num(est) << ", oracle = " << num(oracle) << "\n";
      return 0;
    }

    if (c_profile->parsed()) {
      const auto g = graph_of();
      const Index i = g.index_of(si), j = g.index_of(sj);
      const auto rg = pick_q(g);
      const auto rows = rg ? convergence_profile(*rg, i, j, Lmax) : convergence_profile(g, i, j, Lmax);
      emit(out_path, profile_csv(rows), out);
      if (!out_path.empty()) out << "profile L=1.." << Lmax << ", final gap " << num(rows.back().abs_gap) << "\n";
      return 0;
    }

    if (c_sever->parsed() || c_marg->parsed()) {
      const auto g = graph_of();
      const auto S = g.indices_of(split_labels(sS));
      const auto res = c_sever->parsed()
                           ? sever_nodes(g, S)
                           : marginalize_nodes(g, S, mode == "path" ? MarginalizeMode::Path : MarginalizeMode::Block);
      emit(out_path, dump(matrix_json(from_graph(res))), out);
      if (!out_path.empty()) out << (c_sever->parsed() ? "severed " : "marginalised ") << S.size() << " nodes, " << res.dim() << " remain\n";
      return 0;
    }

    if (c_reduce->parsed()) {
      const auto g = graph_of();
      const auto S = g.indices_of(split_labels(sS));
      const auto red = latent_reduce(g, S, tol > 0 ? tol : 1e-10);
      const auto chk = verify_reduction(g, red);
      json o;
      o["kept"] = labels_json(g, red.kept);
      o["removed"] = labels_json(g, red.removed);
      o["latent_count"] = red.latent_count;
      o["singular_values"] = red.singular_values;
      o["a_tilde"] = json::array();
      o["b_tilde"] = json::array();
      for (const auto& v : red.a_tilde) o["a_tilde"].push_back(vec_json(v));
      for (const auto& v : red.b_tilde) o["b_tilde"].push_back(vec_json(v));
      o["reduced_graph"] = matrix_json(from_graph(red.reduced_graph));
      o["enlarged_graph"] = matrix_json(from_graph(red.enlarged_graph));
      o["residual"] = {{"partial", chk.partial}, {"marginal", chk.marginal}};
      emit(out_path, dump(o), out);
      if (!out_path.empty())
        out << "mu = " << red.latent_count << " latent(s) replace " << red.removed.size() << " nodes; residual partial "
            << num(chk.partial) << ", marginal " << num(chk.marginal) << "\n";
      return 0;
    }

    if (c_sep->parsed()) {
      const auto g = graph_of();
      const auto reps = detect_separating_nodes(g, tol > 0 ? tol : 1e-9);
      json arr = json::array();
      int count = 0;
      for (const auto& rep : reps) {
        json comps = json::array();
        for (const auto& c : rep.components) comps.push_back(labels_json(g, c));
        json o;
        o["node"] = g.labels()[rep.node];
        o["separating"] = rep.separating;
        o["factorises"] = rep.factorises;
        o["components"] = comps;
        o["factorisation_residual"] =
            std::isfinite(rep.factorisation_residual) ? json(rep.factorisation_residual) : json(nullptr);
        arr.push_back(o);
        count += rep.separating;
      }
      emit(out_path, dump(arr), out);
      if (!out_path.empty()) out << count << " separating node(s) of " << g.dim() << "\n";
      return 0;
    }

    if (c_chain->parsed()) {
      std::string csv;
      if (table == "gamma") {
        csv = gamma_table(k, m, {std::abs(r)});
      } else {
        const ChainSpec spec{static_cast<int>(d), r};
        const auto sol = chain_sums(spec);
        std::ostringstream os;
        os << "d,r,i,j,rho\n";
        for (int i = 1; i <= spec.d; ++i)
          for (int j = i + 1; j <= spec.d; ++j) {
            if (pairs == "endpoints" && i != 1) continue;
            os << spec.d << ',' << num(r) << ',' << i << ',' << j << ',' << num(chain_pair_corr(sol, i, j)) << '\n';
          }
        csv = os.str();
      }
      emit(out_path, csv, out);
      if (!out_path.empty()) out << "chain table written\n";
      return 0;
    }

    if (c_mi->parsed()) {
      const auto g = graph_of();
      TriPartition part;
      part.A = g.indices_of(split_labels(sA));
      part.B = g.indices_of(split_labels(sB));
      if (c_mi->count("--Z")) {
        part.Z = g.indices_of(split_labels(sZ));
      } else {
        std::vector<char> used(g.dim(), 0);
        for (Index a : part.A) used[a] = 1;
        for (Index b : part.B) used[b] = 1;
        for (Index v = 0; v < g.dim(); ++v)
          if (!used[v]) part.Z.push_back(v);
      }
      const auto res = method == "series" ? conditional_mi_series(g, part, nmax, q) : conditional_mi_closed(g, part);
      json o;
      o["nats"] = res.nats;
      o["bits"] = res.bits();
      o["method"] = method_name(res.method);
      if (res.method == InfoMethod::TraceSeries) o["terms"] = res.series_terms;
      if (res.q) o["q"] = *res.q;
      emit(out_path, dump(o), out);
      if (!out_path.empty()) out << "I = " << num(res.nats) << " nats\n";
      return 0;
    }

    if (c_sample->parsed()) {
      MatrixFile mf;
      json params;
      if (kind == "random") {
        const auto s = sample_partial_graph({d, n, seed});
        mf = from_graph(s.graph);
        params = {{"d", d}, {"n", n}, {"spectral_radius", s.spectral_radius}, {"flagged", s.flagged}};
      } else if (kind == "martingale") {
        const auto C = martingale_covariance({d, alpha, {}});
        mf.kind = MatrixKind::Covariance;
        mf.data = C.entries();
        mf.labels = default_labels(d);
        params = {{"T", d}, {"alpha", alpha}};
      } else {
        CanonicalParams cp;
        cp.d = d;
        cp.r = r;
        params = {{"d", d}, {"r", r}};
        if (kind == "example_R") {
          std::vector<double> w;
          for (const auto& t : split_labels(weights)) w.push_back(std::stod(t));
          if (w.size() != 5) throw Error(ErrorCode::InvalidArgument, "--weights needs r12,r13,r23,r24,r34");
          cp.r12 = w[0], cp.r13 = w[1], cp.r23 = w[2], cp.r24 = w[3], cp.r34 = w[4];
          params = {{"weights", w}};
        }
        mf = from_graph(canonical_graph(canonical_kind_from(kind), cp));
      }
      mf.provenance = {{"kind", kind}, {"params", params}, {"seed", seed}, {"generator", kGeneratorId}};
      emit(out_path, dump(matrix_json(mf)), out);
      if (!out_path.empty()) out << "sampled " << kind << " (dim " << mf.data.rows() << ")\n";
      return 0;
    }

    if (c_fig->parsed()) {
      emit(out_path, figure_data(figure_kind_from(fig), fp), out);
      if (!out_path.empty()) out << fig << " data written\n";
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "usage error: no subcommand\n";
  return 2;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace pathcorr::cli
