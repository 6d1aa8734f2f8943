#include "ggbm/cli.hpp"
int main(int argc, char** argv) { return ggbm::cli::run(argc, argv); }
