#include <iostream>

#include "curvedcomb/cli/app.hpp"

int main(int argc, char** argv) {
  return curvedcomb::cli::run(argc, argv, std::cout, std::cerr);
}
