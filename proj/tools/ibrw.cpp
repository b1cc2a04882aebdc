#include <iostream>

#include "ibrw/cli.hpp"

int main(int argc, char** argv) { return ibrw::run_cli(argc, argv, std::cout, std::cerr); }
