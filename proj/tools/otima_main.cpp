#include <iostream>

#include "otima/cli.hpp"

int main(int argc, char** argv) { return otima::cli::run(argc, argv, std::cout, std::cerr); }
