#include <iostream>

#include "depthlab/cli.hpp"

int main(int argc, char** argv) { return depthlab::cli_dispatch(argc, argv, std::cout, std::cerr); }
