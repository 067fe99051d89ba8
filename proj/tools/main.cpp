#include <iostream>
#include <vector>

#include "rootgeo/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rootgeo::cli::run(args, std::cout, std::cerr);
}
