#include <iostream>

#include "vrect_cli.hpp"

int main(int argc, char** argv) { return vrect::run(argc, argv, std::cout, std::cerr); }
