#include <iostream>

#include "qmarg/cli/commands.hpp"

int main(int argc, char** argv) { return qmarg::cli::run(argc, argv, std::cout, std::cerr); }
