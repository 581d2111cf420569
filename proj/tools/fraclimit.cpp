#include <iostream>

#include "fraclimit/cli.hpp"

int main(int argc, char** argv) {
  return fraclimit::cli::run(argc, argv, std::cout, std::cerr);
}
