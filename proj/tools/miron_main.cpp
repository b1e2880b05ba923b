#include "miron/cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return miron::cli::dispatch(argc, argv, std::cin, std::cout, std::cerr); }
