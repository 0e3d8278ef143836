#include <iostream>

#include "lmnne_cli/commands.h"

int main(int argc, char** argv) {
  return lmnne::cli::run_cli(argc, argv, std::cout, std::cerr);
}
