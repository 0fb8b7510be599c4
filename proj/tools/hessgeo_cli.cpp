#include <iostream>

#include "hessgeo/cli.hpp"

int main(int argc, char** argv) { return hessgeo::run_cli(argc, argv, std::cout, std::cerr); }
