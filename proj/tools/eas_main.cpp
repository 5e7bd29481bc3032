#include <iostream>
#include <string>
#include <vector>

#include "eas/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return eas::run_cli(args, std::cout, std::cerr);
}
