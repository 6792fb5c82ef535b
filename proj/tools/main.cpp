#include "ggmdir/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ggmdir::run_cli(argc, argv, std::cout, std::cerr); }
