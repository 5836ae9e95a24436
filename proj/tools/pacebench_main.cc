#include <iostream>
#include <string>
#include <vector>

#include "pacebench/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pacebench::Dispatch(args, std::cout, std::cerr);
}
