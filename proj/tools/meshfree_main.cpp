#include <iostream>

#include "meshfree/io/cli.hpp"

int main(int argc, char** argv) { return meshfree::run_cli(argc, argv, std::cout, std::cerr); }
