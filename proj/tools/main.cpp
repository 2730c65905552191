#include <iostream>

#include "geophase/cli.hpp"

int main(int argc, char** argv) { return geophase::run_cli(argc, argv, std::cout, std::cerr); }
