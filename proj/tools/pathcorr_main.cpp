#include "pathcorr/cli.hpp"

int main(int argc, char** argv) { return pathcorr::cli::run(argc, argv); }
