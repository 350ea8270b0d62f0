#include <iostream>
#include <string>
#include <vector>

#include "steinchaos_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return steinchaos::cli::run(args, std::cout, std::cerr);
}
