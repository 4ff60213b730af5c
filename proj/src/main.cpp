#include <iostream>

#include "sbpsat/cli.hpp"

int main(int argc, char** argv) { return sbpsat::cli::run(argc, argv, std::cout, std::cerr); }
