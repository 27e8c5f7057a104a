#include <iostream>
#include <string>
#include <vector>

#include "holoquilt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return holoquilt::RunCli(args, std::cout, std::cerr);
}
