#include <iostream>

#include "hirschfa/cli.hpp"

int main(int argc, char** argv) {
  return hirschfa::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
