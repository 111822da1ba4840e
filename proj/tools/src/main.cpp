#include <iostream>

#include "orbcorr_cli/cli.hpp"

int main(int argc, char** argv) { return orbcorr::cli::run_cli(argc, argv, std::cout, std::cerr); }
