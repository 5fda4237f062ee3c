#include <iostream>

#include "hire/cli.hpp"

int main(int argc, char** argv) { return hire::run_cli(argc, argv, std::cout, std::cerr); }
