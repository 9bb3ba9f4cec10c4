#include <string>
#include <vector>

#include "anongame/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return anongame::run_cli(args);
}
