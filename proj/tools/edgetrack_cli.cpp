#include <iostream>

#include "edgetrack/cli.hpp"

int main(int argc, char** argv) {
  return edgetrack::cli_main(argc, argv, std::cout, std::cerr);
}
