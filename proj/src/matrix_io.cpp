#include "pathcorr/matrix_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace pathcorr {

using nlohmann::json;

const char* kind_name(MatrixKind k) noexcept {
  switch (k) {
    case MatrixKind::Covariance: return "covariance";
    case MatrixKind::Precision: return "precision";
    case MatrixKind::Partial: return "partial";
    case MatrixKind::Marginal: return "marginal";
  }
  return "unknown";
}

MatrixKind kind_from(const std::string& s) {
  if (s == "covariance") return MatrixKind::Covariance;
  if (s == "precision") return MatrixKind::Precision;
  if (s == "partial") return MatrixKind::Partial;
  if (s == "marginal") return MatrixKind::Marginal;
  throw Error(ErrorCode::ParseError, "unknown matrix kind '" + s + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path + "'");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

namespace {

MatrixFile parse_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad JSON: ") + e.what());
  }
  try {
    MatrixFile m;
    m.kind = kind_from(j.at("kind").get<std::string>());
    const auto n = j.at("dim").get<Index>();
    const auto& data = j.at("data");
    if (n < 1 || !data.is_array() || static_cast<Index>(data.size()) != n * n)
      throw Error(ErrorCode::ParseError, "data must hold dim*dim numbers");
    m.data.resize(n, n);
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b) m.data(a, b) = data[a * n + b].get<double>();
    if (j.contains("labels")) m.labels = j["labels"].get<std::vector<std::string>>();
    if (m.labels.empty()) m.labels = default_labels(n);
    if (static_cast<Index>(m.labels.size()) != n) throw Error(ErrorCode::ParseError, "label count differs from dim");
    if (j.contains("scale") && !j["scale"].is_null()) {
      const auto s = j["scale"].get<std::vector<double>>();
      if (static_cast<Index>(s.size()) != n) throw Error(ErrorCode::ParseError, "scale length differs from dim");
      m.scale = Eigen::Map<const Vec>(s.data(), n);
    }
    if (j.contains("provenance")) m.provenance = j["provenance"];
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad matrix file: ") + e.what());
  }
}

MatrixFile parse_csv(const std::string& text, MatrixKind kind) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "bad CSV number '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  const Index n = rows.size();
  if (n == 0) throw Error(ErrorCode::ParseError, "empty CSV");
  MatrixFile m;
  m.kind = kind;
  m.data.resize(n, n);
  for (Index a = 0; a < n; ++a) {
    if (static_cast<Index>(rows[a].size()) != n) throw Error(ErrorCode::NotSquare, "CSV is not square");
    for (Index b = 0; b < n; ++b) m.data(a, b) = rows[a][b];
  }
  m.labels = default_labels(n);
  return m;
}

Mat precision_of(const MatrixFile& m) {
  switch (m.kind) {
    case MatrixKind::Covariance:
    case MatrixKind::Marginal:
      return cov_to_precision(CovarianceMatrix(m.data)).entries();
    case MatrixKind::Precision:
      return PrecisionMatrix(m.data).entries();
    case MatrixKind::Partial:
      return partial_to_precision(PartialCorrelationGraph(m.data, m.labels, m.scale)).entries();
  }
  throw Error(ErrorCode::InvalidArgument, "unknown kind");
}

}  // namespace

MatrixFile parse_matrix(const std::string& text, std::optional<MatrixKind> csv_kind) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_json(text);
  if (!csv_kind) throw Error(ErrorCode::ParseError, "CSV input needs its matrix kind");
  return parse_csv(text, *csv_kind);
}

MatrixFile read_matrix(const std::string& path, std::optional<MatrixKind> csv_kind) {
  return parse_matrix(read_text(path), csv_kind);
}

json matrix_json(const MatrixFile& m) {
  const Index n = m.data.rows();
  json j;
  j["kind"] = kind_name(m.kind);
  j["dim"] = n;
  j["labels"] = m.labels.empty() ? default_labels(n) : m.labels;
  std::vector<double> flat;
  flat.reserve(n * n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) flat.push_back(m.data(a, b));
  j["data"] = flat;
  if (m.scale) j["scale"] = std::vector<double>(m.scale->data(), m.scale->data() + m.scale->size());
  if (!m.provenance.is_null()) j["provenance"] = m.provenance;
  return j;
}

MatrixFile from_graph(const PartialCorrelationGraph& g) {
  MatrixFile m;
  m.kind = MatrixKind::Partial;
  m.data = g.weights();
  m.labels = g.labels();
  m.scale = g.scale();
  return m;
}

MatrixFile from_marginal(const MarginalCorrelationMatrix& p, std::vector<std::string> labels) {
  MatrixFile m;
  m.kind = MatrixKind::Marginal;
  m.data = p.entries();
  m.labels = std::move(labels);
  return m;
}

PartialCorrelationGraph to_graph(const MatrixFile& m) {
  if (m.kind == MatrixKind::Partial) return PartialCorrelationGraph(m.data, m.labels, m.scale);
  return precision_to_partial(PrecisionMatrix(precision_of(m)), m.labels);
}

MatrixFile convert(const MatrixFile& m, MatrixKind to) {
  MatrixFile out;
  out.kind = to;
  out.labels = m.labels;
  switch (to) {
    case MatrixKind::Partial:
      return from_graph(to_graph(m));
    case MatrixKind::Precision:
      out.data = precision_of(m);
      return out;
    case MatrixKind::Covariance:
      if (m.kind == MatrixKind::Covariance || m.kind == MatrixKind::Marginal)
        out.data = CovarianceMatrix(m.data).entries();
      else
        out.data = precision_to_cov(PrecisionMatrix(precision_of(m))).entries();
      return out;
    case MatrixKind::Marginal:
      if (m.kind == MatrixKind::Partial) return from_marginal(partial_to_marginal_oracle(to_graph(m)), m.labels);
      if (m.kind == MatrixKind::Precision)
        return from_marginal(cov_to_marginal(precision_to_cov(PrecisionMatrix(m.data))), m.labels);
      return from_marginal(cov_to_marginal(CovarianceMatrix(m.data)), m.labels);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown target kind");
}

}  // namespace pathcorr
