#include <iostream>

#include "zeno_cli/app.hpp"

int main(int argc, char** argv) { return zeno::cli::run_cli(argc, argv, std::cout, std::cerr); }
