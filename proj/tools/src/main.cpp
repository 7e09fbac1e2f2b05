#include <iostream>

#include "odsim/cli/commands.hpp"

int main(int argc, char** argv) { return odsim::cli::main_entry(argc, argv, std::cout, std::cerr); }
