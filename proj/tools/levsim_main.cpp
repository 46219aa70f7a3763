#include <iostream>
#include <string>
#include <vector>

#include "levsim/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return levsim::dispatch(args, std::cout, std::cerr);
}
