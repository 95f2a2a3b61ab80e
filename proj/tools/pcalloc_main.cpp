#include <iostream>
#include <string>
#include <vector>

#include "pcalloc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return pcalloc::cli::run(args, std::cout, std::cerr);
}
