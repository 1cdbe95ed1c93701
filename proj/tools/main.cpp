#include <iostream>

#include "dyncomm/cli.hpp"

int main(int argc, char** argv) { return dyncomm::run_cli(argc, argv, std::cout, std::cerr); }
