#include "pwsim/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return pwsim::cli::run(argc, argv, std::cout, std::cerr); }
