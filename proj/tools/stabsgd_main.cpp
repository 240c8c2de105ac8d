#include <iostream>
#include <string>
#include <vector>

#include "stabsgd/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return stabsgd::run_cli(args, std::cout, std::cerr);
}
