#include <iostream>

#include "cbal/cli.hpp"

int main(int argc, char** argv) {
  return cbal::cli::run(argc, argv, std::cout, std::cerr);
}
