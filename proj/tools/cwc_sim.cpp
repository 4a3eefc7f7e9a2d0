#include <iostream>

#include "cwc/cli.hpp"

int main(int argc, char** argv) { return cwc::run_cli(argc, argv, std::cout, std::cerr); }
