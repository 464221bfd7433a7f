#include <iostream>

#include "lepage/cli.hpp"

int main(int argc, char** argv) { return lepage::cli::run(argc, argv, std::cout, std::cerr); }
