#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "pathcorr/chains.hpp"
#include "pathcorr/cli.hpp"
#include "pathcorr/matrix_io.hpp"
#include "pathcorr/pathsum.hpp"
#include "pathcorr/sampling.hpp"
#include "support.hpp"

using namespace pathcorr;
using nlohmann::json;
using testsupport::max_abs;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli_run(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int c = cli::run(args, o, e);
  return {c, o.str(), e.str()};
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("pathcorr_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string save_graph(const PartialCorrelationGraph& g, const std::string& name) const {
    write_text(path(name), dump(matrix_json(from_graph(g))));
    return path(name);
  }
  fs::path dir_;
};

}  // namespace

TEST(MatrixIo, JsonRoundTrip) {
  const Mat W = testsupport::random_spd(5, 1);
  const auto g = precision_to_partial(PrecisionMatrix(W), {"a", "b", "c", "d", "e"});
  auto mf = from_graph(g);
  mf.provenance = {{"kind", "test"}};
  const auto back = parse_matrix(dump(matrix_json(mf)));
  EXPECT_EQ(back.kind, MatrixKind::Partial);
  EXPECT_EQ(back.labels, g.labels());
  EXPECT_EQ(max_abs(back.data - g.weights()), 0.0);
  ASSERT_TRUE(back.scale.has_value());
  EXPECT_EQ(max_abs(*back.scale - *g.scale()), 0.0);
  EXPECT_EQ(back.provenance["kind"], "test");
  // serialised twice gives the same bytes
  EXPECT_EQ(dump(matrix_json(back)), dump(matrix_json(mf)));
}

TEST(MatrixIo, CsvNeedsKindAndIsSquare) {
  const std::string csv = "1,0.5\n0.5,2\n";
  EXPECT_THROW(parse_matrix(csv), Error);
  const auto m = parse_matrix(csv, MatrixKind::Covariance);
  EXPECT_EQ(m.data(1, 1), 2.0);
  EXPECT_EQ(m.labels, (std::vector<std::string>{"1", "2"}));
  try {
    parse_matrix("1,2\n3\n", MatrixKind::Covariance);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSquare);
  }
  EXPECT_THROW(parse_matrix("1,x\n0,1\n", MatrixKind::Covariance), Error);
  EXPECT_THROW(parse_matrix("{ not json"), Error);
}

TEST(MatrixIo, ConvertChainAgreesWithModules) {
  const Mat C = testsupport::random_spd(4, 3);
  MatrixFile mf;
  mf.kind = MatrixKind::Covariance;
  mf.data = C;
  mf.labels = default_labels(4);
  const auto part = convert(mf, MatrixKind::Partial);
  const auto ref = precision_to_partial(cov_to_precision(CovarianceMatrix(C)));
  EXPECT_LT(max_abs(part.data - ref.weights()), 1e-12);
  const auto marg = convert(part, MatrixKind::Marginal);
  EXPECT_LT(max_abs(marg.data - cov_to_marginal(CovarianceMatrix(C)).entries()), 1e-10);
  const auto cov = convert(part, MatrixKind::Covariance);
  EXPECT_LT(max_abs(cov.data - C) / max_abs(C), 1e-10);
}

TEST_F(TempDir, ConvertCsvToPartial) {
  write_text(path("w.csv"), "2,-0.6\n-0.6,2\n");
  const auto r = cli_run({"convert", "--in", path("w.csv"), "--as", "precision", "--to", "partial"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["kind"], "partial");
  EXPECT_DOUBLE_EQ(j["data"][1].get<double>(), 0.3);
}

TEST_F(TempDir, ProfileMatchesModule) {
  const auto g = testsupport::random_graph(7, 21);
  const auto in = save_graph(g, "R.json");
  const auto r = cli_run({"profile", "--in", in, "--i", "3", "--j", "7", "--Lmax", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, profile_csv(convergence_profile(g, 2, 6, 10)));
}

TEST_F(TempDir, ExpandReportsOracle) {
  const auto g = one_many_one_graph(6, 0.3);
  const auto in = save_graph(g, "R.json");
  const auto r = cli_run({"expand", "--in", in, "--i", "1", "--j", "6", "--L", "40"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["rho_oracle"].get<double>(), 4 * 0.09 / (1 - 4 * 0.09), 1e-12);
  EXPECT_NEAR(j["rho_hat"].get<double>(), j["rho_oracle"].get<double>(), 1e-12);
}

TEST_F(TempDir, FlaggedGraphNeedsRescale) {
  const auto in = save_graph(complete_graph(6, -0.3), "R.json");
  const auto r = cli_run({"expand", "--in", in, "--i", "1", "--j", "2", "--L", "5"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("SpectralRadiusTooLarge"), std::string::npos);
  const auto ok = cli_run({"expand", "--in", in, "--i", "1", "--j", "2", "--L", "400", "--rescale"});
  ASSERT_EQ(ok.code, 0) << ok.err;
  const auto j = json::parse(ok.out);
  EXPECT_NEAR(j["rho_hat"].get<double>(), j["rho_oracle"].get<double>(), 1e-10);
  EXPECT_EQ(cli_run({"expand", "--in", in, "--i", "1", "--j", "2", "--L", "5", "--rescale", "--q", "0.5"}).code, 2);
}

TEST(Cli, ChainTable) {
  const auto r = cli_run({"chain", "--d", "20", "--r", "0.45", "--pairs", "all"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "d,r,i,j,rho");
  int rows = 0;
  const auto sol = chain_sums({20, 0.45});
  while (std::getline(is, line)) {
    int d, i, j;
    double rr, rho;
    ASSERT_EQ(std::sscanf(line.c_str(), "%d,%lf,%d,%d,%lf", &d, &rr, &i, &j, &rho), 5);
    EXPECT_EQ(rho, chain_pair_corr(sol, i, j));
    ++rows;
  }
  EXPECT_EQ(rows, 190);
  const auto g = cli_run({"chain", "--r", "0.47", "--table", "gamma", "--k", "10", "--m", "6"});
  ASSERT_EQ(g.code, 0);
  EXPECT_NE(g.out.find("0.46999999999999997,10,6,"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli_run({"--help"}).code, 0);
  EXPECT_EQ(cli_run({}).code, 2);
  EXPECT_EQ(cli_run({"frobnicate"}).code, 2);
  EXPECT_EQ(cli_run({"chain", "--d", "5"}).code, 2);
  EXPECT_EQ(cli_run({"chain", "--d", "5", "--r", "0.7"}).code, 1);
  EXPECT_EQ(cli_run({"convert", "--in", "/nonexistent/x.json", "--to", "partial"}).code, 1);
}

TEST_F(TempDir, SampleIsByteReproducible) {
  const std::vector<std::string> args{"sample", "--kind", "random", "--d", "8", "--n", "40", "--seed", "17"};
  const auto a = cli_run(args), b = cli_run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto j = json::parse(a.out);
  EXPECT_EQ(j["provenance"]["generator"], kGeneratorId);
  EXPECT_EQ(j["provenance"]["seed"], 17);
  const auto mf = parse_matrix(a.out);
  EXPECT_EQ(max_abs(mf.data - sample_partial_graph({8, 40, 17}).graph.weights()), 0.0);
  // --out writes the same bytes and keeps stdout for the summary
  const auto c = cli_run({"sample", "--kind", "random", "--d", "8", "--n", "40", "--seed", "17", "--out", path("s.json")});
  ASSERT_EQ(c.code, 0);
  EXPECT_EQ(read_text(path("s.json")), a.out);
  EXPECT_NE(c.out, a.out);
}

TEST_F(TempDir, TransformsThroughCli) {
  const auto g = testsupport::random_graph(6, 5);
  const auto in = save_graph(g, "R.json");
  const auto m = cli_run({"marginalize", "--in", in, "--S", "2,5"});
  ASSERT_EQ(m.code, 0) << m.err;
  const auto mg = to_graph(parse_matrix(m.out));
  EXPECT_EQ(mg.labels(), (std::vector<std::string>{"1", "3", "4", "6"}));
  const auto mp = cli_run({"marginalize", "--in", in, "--S", "2,5", "--mode", "path"});
  EXPECT_LT(max_abs(to_graph(parse_matrix(mp.out)).weights() - mg.weights()), 1e-10);
  const auto s = cli_run({"sever", "--in", in, "--S", "1"});
  ASSERT_EQ(s.code, 0);
  EXPECT_EQ(to_graph(parse_matrix(s.out)).dim(), 5);
  EXPECT_EQ(cli_run({"sever", "--in", in, "--S", "nope"}).code, 1);

  const auto sep = cli_run({"separators", "--in", save_graph(chain_graph(4, 0.3), "c.json")});
  ASSERT_EQ(sep.code, 0);
  const auto arr = json::parse(sep.out);
  EXPECT_EQ(arr.size(), 4u);
  EXPECT_TRUE(arr[1]["separating"].get<bool>());
  EXPECT_FALSE(arr[0]["separating"].get<bool>());

  const auto red = cli_run({"reduce", "--in", save_graph(one_many_one_graph(7, 0.25), "o.json"), "--S", "2,3,4,5,6"});
  ASSERT_EQ(red.code, 0) << red.err;
  const auto rj = json::parse(red.out);
  EXPECT_EQ(rj["latent_count"], 1);
  EXPECT_LT(rj["residual"]["marginal"].get<double>(), 1e-8);
}

TEST_F(TempDir, MutualInformation) {
  Mat R = Mat::Zero(3, 3);
  R(0, 1) = R(1, 0) = 0.5;
  R(1, 2) = R(2, 1) = 0.2;
  const auto in = save_graph(PartialCorrelationGraph(R), "R.json");
  const auto c = cli_run({"mi", "--in", in, "--A", "1", "--B", "2"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_NEAR(json::parse(c.out)["nats"].get<double>(), -0.5 * std::log(1 - 0.25), 1e-14);
  const auto s = cli_run({"mi", "--in", in, "--A", "1", "--B", "2", "--method", "series"});
  ASSERT_EQ(s.code, 0) << s.err;
  const auto sj = json::parse(s.out);
  EXPECT_EQ(sj["method"], "trace-series");
  EXPECT_NEAR(sj["nats"].get<double>(), -0.5 * std::log(1 - 0.25), 1e-12);
}

TEST(Cli, FigureFourData) {
  const auto r = cli_run({"figure", "--kind", "fig4"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, cli::figure_data(cli::FigureKind::Fig4, {}));
  EXPECT_EQ(r.out.substr(0, 16), "abs_r,k,m,gamma\n");
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  int rows = 0;
  while (std::getline(is, line)) {
    double ar, gamma;
    int k, m;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%d,%d,%lf", &ar, &k, &m, &gamma), 4);
    EXPECT_EQ(gamma, amplification_factor(k, m, ar));
    ++rows;
  }
  EXPECT_EQ(rows, 7 * 11);
}

TEST(Cli, StudyPairsAndLabels) {
  const auto p = cli::study_pairs(100);
  EXPECT_EQ(p[0], (std::pair<Index, Index>{0, 1}));
  EXPECT_EQ(p[1], (std::pair<Index, Index>{9, 49}));
  EXPECT_EQ(p[2], (std::pair<Index, Index>{98, 99}));
  EXPECT_EQ(cli::split_labels(" a, b ,,c"), (std::vector<std::string>{"a", "b", "c"}));
}
