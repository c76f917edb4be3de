#include <iostream>

#include "mfpotts/cli.hpp"

int main(int argc, char** argv) { return mfpotts::run_cli(argc, argv, std::cout, std::cerr); }
