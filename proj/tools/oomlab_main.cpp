#include <iostream>
#include <string>
#include <vector>

#include "oomlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return oomlab::run_cli(args, std::cout, std::cerr);
}
