#include <iostream>

#include "mill/cli.hpp"

int main(int argc, char** argv) { return mill::cli::main(argc, argv, std::cout, std::cerr); }
