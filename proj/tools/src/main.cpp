#include <iostream>

#include "sibmm_cli/cli.hpp"

int main(int argc, char** argv) { return sibmm::cli::run(argc, argv, std::cout, std::cerr); }
