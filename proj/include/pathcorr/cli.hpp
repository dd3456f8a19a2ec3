#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pathcorr/matrices.hpp"

namespace pathcorr::cli {

// 0 ok, 1 domain error, 2 usage error
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

enum class FigureKind { Fig4, Fig5, Fig6 };
FigureKind figure_kind_from(const std::string& s);

struct FigureParams {
  int k = 10;
  int m_max = 10;
  Index d = 100;
  Index n = 1000;
  std::uint64_t seed = 2024;
  int L_max = 0;  // 0: 10 for fig5, 30 for fig6
};

std::string figure_data(FigureKind kind, const FigureParams& p);

// index pairs examined in the convergence study, one triple per d
std::vector<std::pair<Index, Index>> study_pairs(Index d);
std::vector<double> fig4_r_grid();
std::vector<double> fig6_q_grid();

std::vector<std::string> split_labels(const std::string& s);

}  // namespace pathcorr::cli
