#include <iostream>

#include "homoghj/cli.hpp"

int main(int argc, char** argv) { return homoghj::run_cli(argc, argv, std::cout, std::cerr); }
