#include <string>
#include <vector>

#include "ccfront/cli.hpp"

int main(int argc, char** argv) {
  return ccfront::cli::cli_main(std::vector<std::string>(argv + 1, argv + argc));
}
