#include <iostream>
#include <string>
#include <vector>

#include "digestlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return digestlab::cli::run(args, std::cout, std::cerr);
}
