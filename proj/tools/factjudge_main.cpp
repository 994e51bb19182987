#include <iostream>

#include "factjudge/cli.hpp"

int main(int argc, char** argv) { return factjudge::cli::run_cli(argc, argv, std::cout, std::cerr); }
