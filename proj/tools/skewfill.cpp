#include <iostream>

#include "skewfill/cli.hpp"

int main(int argc, char** argv) { return skewfill::cli::run(argc, argv, std::cin, std::cout, std::cerr); }
