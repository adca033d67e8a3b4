#include "ratkit/experiment.hpp"

#include <iostream>

int main(int argc, char** argv) { return ratkit::exp::run_cli(argc, argv, std::cout, std::cerr); }
