#include <string>
#include <vector>

#include "fiberfuse/cli.hpp"

int main(int argc, char** argv) {
  return fiberfuse::run_cli(std::vector<std::string>(argv, argv + argc));
}
