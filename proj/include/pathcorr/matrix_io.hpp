#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "pathcorr/matrices.hpp"

namespace pathcorr {

enum class MatrixKind { Covariance, Precision, Partial, Marginal };

const char* kind_name(MatrixKind k) noexcept;
MatrixKind kind_from(const std::string& s);

struct MatrixFile {
  MatrixKind kind = MatrixKind::Covariance;
  Mat data;
  std::vector<std::string> labels;
  std::optional<Vec> scale;  // partial graphs only
  nlohmann::json provenance;  // null when absent
};

// JSON by content; otherwise CSV with the kind supplied by the caller
MatrixFile parse_matrix(const std::string& text, std::optional<MatrixKind> csv_kind = std::nullopt);
MatrixFile read_matrix(const std::string& path, std::optional<MatrixKind> csv_kind = std::nullopt);

nlohmann::json matrix_json(const MatrixFile& m);
MatrixFile from_graph(const PartialCorrelationGraph& g);
MatrixFile from_marginal(const MarginalCorrelationMatrix& p, std::vector<std::string> labels);

// any kind interpreted as a Gaussian system
PartialCorrelationGraph to_graph(const MatrixFile& m);
MatrixFile convert(const MatrixFile& m, MatrixKind to);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);
std::string dump(const nlohmann::json& j);

}  // namespace pathcorr
