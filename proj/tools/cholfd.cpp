#include <iostream>

#include "chol/cli.hpp"

int main(int argc, char** argv) {
  return chol::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
