#include <iostream>
#include <string>
#include <vector>

#include "presb/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return presb::cli::run(args, std::cout, std::cerr);
}
