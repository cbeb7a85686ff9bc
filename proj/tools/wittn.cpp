#include <iostream>

#include "wittn/cli.hpp"

int main(int argc, char** argv) { return wittn::cli::run(argc, argv, std::cout, std::cerr); }
