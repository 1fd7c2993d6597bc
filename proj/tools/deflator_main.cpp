#include <iostream>

#include "deflator/cli.hpp"

int main(int argc, char** argv) { return deflator::cli::run(argc, argv, std::cout, std::cerr); }
