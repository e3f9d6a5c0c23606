#include <iostream>

#include "fastctx/cli.h"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return fastctx::cli::Run(argc, argv, std::cin, std::cout, std::cerr);
}
