#include <iostream>

#include "unshuffle/cli.hpp"

int main(int argc, char** argv) {
  return unshuffle::run_cli(argc, argv, std::cout, std::cerr);
}
