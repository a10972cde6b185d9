#include <iostream>
#include <string>
#include <vector>

#include "parisian/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return parisian::cli::run(args, std::cout, std::cerr);
}
