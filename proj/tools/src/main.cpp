#include <string>
#include <vector>

#include "candist_cli.hpp"

int main(int argc, char** argv) {
  return candist::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
