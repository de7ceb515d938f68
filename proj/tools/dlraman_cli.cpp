#include <iostream>

#include "dlraman/cli.hpp"

int main(int argc, char** argv) { return dlraman::run_cli(argc, argv, std::cout, std::cerr); }
