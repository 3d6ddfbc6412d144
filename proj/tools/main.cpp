#include <iostream>
#include <string>
#include <vector>

#include "trslab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return trslab::runCli(args, std::cout, std::cerr);
}
