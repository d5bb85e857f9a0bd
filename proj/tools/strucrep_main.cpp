#include <iostream>
#include <string>
#include <vector>

#include "strucrep/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return strucrep::run_cli(args, std::cin, std::cout, std::cerr);
}
