#include <iostream>
#include <string>
#include <vector>

#include "ptskdv/cli_app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ptskdv::cli::cli_run(args, std::cout, std::cerr);
}
