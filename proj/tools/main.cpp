#include <iostream>

#include "mclamp/cli.hpp"

int main(int argc, char** argv) { return mclamp::run_cli(argc, argv, std::cout, std::cerr); }
