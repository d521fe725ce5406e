#include <iostream>

#include "escher/commands.hpp"

int main(int argc, char** argv) { return escher::cli_main(argc, argv, std::cout, std::cerr); }
