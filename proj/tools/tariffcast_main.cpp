#include <iostream>

#include "tariffcast/cli.hpp"

int main(int argc, char** argv) {
  return tariffcast::cli::run(argc, argv, std::cout, std::cerr);
}
