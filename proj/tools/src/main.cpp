#include <iostream>
#include <string>
#include <vector>

#include "partialreg/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return partialreg::cli::run(args, std::cout, std::cerr);
}
