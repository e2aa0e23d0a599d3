#include <iostream>
#include <string>
#include <vector>

#include "specband/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return specband::run_cli(args, std::cout, std::cerr);
}
