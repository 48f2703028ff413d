#include <iostream>

#include "concord/cli.hpp"

int main(int argc, char** argv) { return concord::run_cli(argc, argv, std::cout, std::cerr); }
