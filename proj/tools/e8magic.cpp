#include <iostream>
#include <string>
#include <vector>

#include "e8magic/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return e8magic::cli::run_cli(args, std::cout, std::cerr);
}
