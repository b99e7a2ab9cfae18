#include <iostream>

#include "bvp/cli.hpp"

int main(int argc, char** argv) { return bvp::run_cli(argc, argv, std::cout, std::cerr); }
