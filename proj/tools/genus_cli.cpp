#include <iostream>
#include <string>
#include <vector>

#include "genus/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  genus::CliResult r = genus::cli_run(args);
  std::cout << r.out;
  std::cerr << r.err;
  return r.code;
}
