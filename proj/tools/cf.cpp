// SPDX-License-Identifier: Apache-2.0
#include <cfkit/cli.hpp>

#include <iostream>

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return cfkit::run_cli(args, std::cout, std::cerr);
}
