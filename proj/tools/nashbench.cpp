#include <iostream>
#include <string>
#include <vector>

#include "nashbench/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nashbench::cli::run(std::move(args), std::cout, std::cerr);
}
