#include <iostream>

#include "sqzcool/cli.hpp"

int main(int argc, char** argv) { return sqzcool::cli::run(argc, argv, std::cout, std::cerr); }
