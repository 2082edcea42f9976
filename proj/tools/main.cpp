#include <iostream>

#include "structpsa/cli.hpp"

int main(int argc, char** argv) { return structpsa::cli::main_entry(argc, argv, std::cout, std::cerr); }
