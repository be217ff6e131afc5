#include <iostream>

#include "dbalign/cli.hpp"

int main(int argc, char** argv) { return dbalign::cli::run(argc, argv, std::cout, std::cerr); }
