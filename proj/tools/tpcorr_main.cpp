#include <iostream>

#include "tpcorr/cli.hpp"

int main(int argc, char** argv) { return tpcorr::cli::run_cli(argc, argv, std::cout, std::cerr); }
