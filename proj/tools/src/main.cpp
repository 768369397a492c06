#include <iostream>

#include "gsprk_cli/cli.hpp"

int main(int argc, char** argv) { return gsprk::cli::run(argc, argv, std::cout, std::cerr); }
