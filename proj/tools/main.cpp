// SPDX-License-Identifier: MIT
#include <string>
#include <vector>

#include "ricciforge/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ricciforge::cli_main(args);
}
