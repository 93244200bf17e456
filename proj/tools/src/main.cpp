#include <iostream>
#include <string>
#include <vector>

#include "sharpe_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return sharpe::cli::run(args, std::cout, std::cerr);
}
