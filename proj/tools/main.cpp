#include <iostream>

#include "elmiss/cli.hpp"

int main(int argc, char** argv) { return elmiss::cli_main(argc, argv, std::cout, std::cerr); }
