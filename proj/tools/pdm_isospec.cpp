#include "pdm/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return pdm::cli_main(argc, argv, std::cout, std::cerr); }
