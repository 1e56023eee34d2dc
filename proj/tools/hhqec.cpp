#include <iostream>

#include "hhqec/cli.hpp"

int main(int argc, char** argv) { return hhqec::run_cli(argc, argv, std::cout, std::cerr); }
