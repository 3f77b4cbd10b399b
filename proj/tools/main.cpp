#include "batchgcd/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return batchgcd::cli::run_cli(argc, argv, std::cout, std::cerr); }
