#include <iostream>

#include "covertnet/cli.hpp"

int main(int argc, char** argv) {
  return covertnet::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
