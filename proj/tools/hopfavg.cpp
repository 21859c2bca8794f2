#include <iostream>

#include "hopfavg/cli.hpp"

int main(int argc, char** argv) { return hopfavg::run_cli(argc, argv, std::cout, std::cerr); }
