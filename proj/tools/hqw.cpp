#include "hqw/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hqw::cli::run(argc, argv, std::cout, std::cerr); }
