#include <iostream>

#include "foon/cli.hpp"

int main(int argc, char** argv) {
  return foon::cli::run(argc, argv, std::cout, std::cerr);
}
