#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return pauli_cloner::cli::run(argc, argv, std::cout, std::cerr); }
