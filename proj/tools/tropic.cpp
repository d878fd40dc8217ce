#include <iostream>

#include "tropic/cli.hpp"

int main(int argc, char** argv) {
  return tropic::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
