#include "hcs/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hcs::cli_main(argc, argv, std::cout, std::cerr); }
