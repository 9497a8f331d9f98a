#include <iostream>
#include <string>
#include <vector>

#include "foldscope/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return foldscope::cli::run(args, std::cout, std::cerr);
}
