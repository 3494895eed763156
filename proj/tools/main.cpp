#include "bench_cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return certiq::cli::main(argc, argv, std::cout, std::cerr); }
