#include <iostream>
#include <string>
#include <vector>

#include "psl2/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return psl2::run(args, std::cout, std::cerr);
}
